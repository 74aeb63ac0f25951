//! Deterministic gridworld simulator.
//!
//! Three task families (mine a block, kill an entity, craft an item) play
//! out on a small walled grid with raw-primitive transition dynamics: one
//! raw token advances the world by exactly one tick. Crafting happens in a
//! modal GUI with a cursor; while the GUI is open only cursor tokens are
//! accepted, and vice versa. Entity motion draws from a named RNG stream
//! carried inside the state so replays are bit-identical.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeding;

/// Widest grid any task may use; observation one-hots are sized to this.
pub const MAX_GRID_DIM: usize = 11;
/// Chebyshev radius within which task-relevant objects are observable.
pub const VIEW_RADIUS: i64 = 4;
/// Attacks needed to break a tree.
pub const TREE_HITS: u8 = 2;
/// Starting hit points for every entity.
pub const ENTITY_HP: i64 = 2;
/// GUI result slot, in (column, row) cursor coordinates.
pub const RESULT_SLOT: (u8, u8) = (3, 1);
/// Cursor column range is 0..=3 (three icon columns plus the result column).
pub const GUI_COLS: u8 = 4;
/// Cursor row range is 0..=2.
pub const GUI_ROWS: u8 = 3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("mode error: {0}")]
    Mode(String),
    #[error("invalid task: {0}")]
    Task(String),
    #[error("could not place {0} in the world")]
    Placement(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Facing {
    N,
    E,
    S,
    W,
}

impl Facing {
    pub const ALL: [Facing; 4] = [Facing::N, Facing::E, Facing::S, Facing::W];

    /// (dx, dy) with y growing downward.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Facing::N => (0, -1),
            Facing::E => (1, 0),
            Facing::S => (0, 1),
            Facing::W => (-1, 0),
        }
    }

    pub fn turned_right(self) -> Facing {
        match self {
            Facing::N => Facing::E,
            Facing::E => Facing::S,
            Facing::S => Facing::W,
            Facing::W => Facing::N,
        }
    }

    pub fn turned_left(self) -> Facing {
        match self {
            Facing::N => Facing::W,
            Facing::W => Facing::S,
            Facing::S => Facing::E,
            Facing::E => Facing::N,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Facing::N => 0,
            Facing::E => 1,
            Facing::S => 2,
            Facing::W => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Facing::N => "N",
            Facing::E => "E",
            Facing::S => "S",
            Facing::W => "W",
        }
    }

    pub fn parse(s: &str) -> Option<Facing> {
        match s {
            "N" => Some(Facing::N),
            "E" => Some(Facing::E),
            "S" => Some(Facing::S),
            "W" => Some(Facing::W),
            _ => None,
        }
    }

    /// Direction from `from` toward the 4-adjacent cell `to`.
    pub fn toward(from: (u8, u8), to: (u8, u8)) -> Option<Facing> {
        let dx = to.0 as i64 - from.0 as i64;
        let dy = to.1 as i64 - from.1 as i64;
        match (dx, dy) {
            (0, -1) => Some(Facing::N),
            (1, 0) => Some(Facing::E),
            (0, 1) => Some(Facing::S),
            (-1, 0) => Some(Facing::W),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    Empty,
    Tree { species: String },
    Rock,
    Table,
    Wall,
}

impl CellKind {
    pub fn is_passable(&self) -> bool {
        matches!(self, CellKind::Empty)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentPose {
    pub x: u8,
    pub y: u8,
    pub facing: Facing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityState {
    pub kind: String,
    pub x: u8,
    pub y: u8,
    pub hp: i64,
    pub move_prob: f64,
}

impl EntityState {
    /// Chasers walk toward the agent; wanderers take random cardinal steps.
    pub fn chases(&self) -> bool {
        matches!(self.kind.as_str(), "zombie" | "skeleton")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuiState {
    /// icons[row][col] for the 3x3 icon grid.
    pub icons: [[String; 3]; 3],
    /// (column, row); column 3 holds the result slot.
    pub cursor: (u8, u8),
    pub selected: Option<String>,
}

/// Crafting furniture baked into the world at reset: the icon layout the
/// table shows when opened plus the one recipe it can produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CraftingSetup {
    pub icons: [[String; 3]; 3],
    pub ingredient: String,
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskFamily {
    MineBlock,
    KillEntity,
    CraftItem,
}

impl TaskFamily {
    pub const ALL: [TaskFamily; 3] =
        [TaskFamily::MineBlock, TaskFamily::KillEntity, TaskFamily::CraftItem];

    pub fn index(self) -> usize {
        match self {
            TaskFamily::MineBlock => 0,
            TaskFamily::KillEntity => 1,
            TaskFamily::CraftItem => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskFamily::MineBlock => "mine_block",
            TaskFamily::KillEntity => "kill_entity",
            TaskFamily::CraftItem => "craft_item",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Split {
    Id,
    Ood,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Id => "id",
            Split::Ood => "ood",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub family: TaskFamily,
    pub target: String,
    pub grid_w: u8,
    pub grid_h: u8,
    pub horizon_ticks: u64,
    pub max_turns: u32,
    pub split: Split,
}

pub const TREE_SPECIES: [&str; 4] = ["oak", "birch", "spruce", "acacia"];
pub const ENTITY_KINDS: [&str; 4] = ["sheep", "zombie", "cow", "skeleton"];
pub const CRAFT_ITEMS: [&str; 4] = ["torch", "plank", "stick", "bowl"];

/// Every instructable target, in the fixed order used for instruction
/// one-hot encodings.
pub const ALL_TARGETS: [&str; 12] = [
    "oak", "birch", "spruce", "acacia", "sheep", "zombie", "cow", "skeleton", "torch", "plank",
    "stick", "bowl",
];

pub fn target_index(target: &str) -> Option<usize> {
    ALL_TARGETS.iter().position(|t| *t == target)
}

/// Single-ingredient recipes for the crafting GUI.
pub fn recipe_ingredient(item: &str) -> Option<&'static str> {
    match item {
        "torch" => Some("coal"),
        "plank" => Some("log"),
        "stick" => Some("plank_block"),
        "bowl" => Some("clay"),
        _ => None,
    }
}

/// Items that can show up as GUI distractor icons.
const ICON_POOL: [&str; 9] = [
    "coal", "log", "plank_block", "clay", "stone", "apple", "string", "feather", "sand",
];

impl TaskSpec {
    pub fn validate(&self) -> Result<(), WorldError> {
        if self.horizon_ticks == 0 {
            return Err(WorldError::Task("horizon_ticks must be > 0".into()));
        }
        if self.max_turns == 0 {
            return Err(WorldError::Task("max_turns must be > 0".into()));
        }
        if (self.grid_w as usize) > MAX_GRID_DIM || (self.grid_h as usize) > MAX_GRID_DIM {
            return Err(WorldError::Task(format!(
                "grid {}x{} exceeds maximum dimension {}",
                self.grid_w, self.grid_h, MAX_GRID_DIM
            )));
        }
        if self.grid_w < 5 || self.grid_h < 5 {
            return Err(WorldError::Task("grid must be at least 5x5".into()));
        }
        let ok = match self.family {
            TaskFamily::MineBlock => TREE_SPECIES.contains(&self.target.as_str()),
            TaskFamily::KillEntity => ENTITY_KINDS.contains(&self.target.as_str()),
            TaskFamily::CraftItem => CRAFT_ITEMS.contains(&self.target.as_str()),
        };
        if !ok {
            return Err(WorldError::Task(format!(
                "target {:?} is not valid for family {}",
                self.target,
                self.family.as_str()
            )));
        }
        Ok(())
    }

    pub fn task_id(&self) -> String {
        format!(
            "{}:{}:{}x{}",
            self.family.as_str(),
            self.target,
            self.grid_w,
            self.grid_h
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    BlockMined(String),
    EntityKilled(String),
    ItemCrafted(String),
    GuiOpened,
    GuiClosed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    /// Tick counter value after the step that produced this event.
    pub tick: u64,
}

/// Raw primitives: exactly one environment tick each. The embodied set and
/// the GUI cursor set are disjoint; `nop` is valid in both modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawToken {
    Fwd,
    Left,
    Right,
    Atk,
    Use,
    CurUp,
    CurDown,
    CurLeft,
    CurRight,
    Clk,
    Esc,
    Nop,
}

pub const RAW_TOKENS: [RawToken; 12] = [
    RawToken::Fwd,
    RawToken::Left,
    RawToken::Right,
    RawToken::Atk,
    RawToken::Use,
    RawToken::CurUp,
    RawToken::CurDown,
    RawToken::CurLeft,
    RawToken::CurRight,
    RawToken::Clk,
    RawToken::Esc,
    RawToken::Nop,
];

impl RawToken {
    pub fn as_str(self) -> &'static str {
        match self {
            RawToken::Fwd => "fwd",
            RawToken::Left => "left",
            RawToken::Right => "right",
            RawToken::Atk => "atk",
            RawToken::Use => "use",
            RawToken::CurUp => "cup",
            RawToken::CurDown => "cdown",
            RawToken::CurLeft => "cleft",
            RawToken::CurRight => "cright",
            RawToken::Clk => "clk",
            RawToken::Esc => "esc",
            RawToken::Nop => "nop",
        }
    }

    pub fn parse(s: &str) -> Option<RawToken> {
        RAW_TOKENS.iter().copied().find(|t| t.as_str() == s)
    }

    pub fn is_embodied(self) -> bool {
        matches!(
            self,
            RawToken::Fwd | RawToken::Left | RawToken::Right | RawToken::Atk | RawToken::Use
        )
    }

    pub fn is_gui(self) -> bool {
        matches!(
            self,
            RawToken::CurUp
                | RawToken::CurDown
                | RawToken::CurLeft
                | RawToken::CurRight
                | RawToken::Clk
                | RawToken::Esc
        )
    }

    /// Whether this token may be applied to a state in the given GUI mode.
    pub fn mode_valid(self, gui_open: bool) -> bool {
        if self == RawToken::Nop {
            return true;
        }
        if gui_open {
            self.is_gui()
        } else {
            self.is_embodied()
        }
    }
}

/// Full simulator state. A value type: `step` consumes nothing and returns
/// the successor, so independent instances are trivially thread-safe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub schema_version: u32,
    pub width: u8,
    pub height: u8,
    /// Row-major cells, index = y * width + x.
    pub cells: Vec<CellKind>,
    pub agent: AgentPose,
    pub entities: Vec<EntityState>,
    pub gui: Option<GuiState>,
    pub tick: u64,
    /// Accumulated attack hits per cell index.
    pub block_progress: BTreeMap<u16, u8>,
    /// Crafting furniture, present in craft-task worlds.
    pub crafting: Option<CraftingSetup>,
    /// Named stream driving entity motion.
    pub rng_stream: ChaCha8Rng,
}

impl GridState {
    pub fn idx(&self, x: u8, y: u8) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    pub fn cell(&self, x: u8, y: u8) -> &CellKind {
        &self.cells[self.idx(x, y)]
    }

    pub fn entity_at(&self, x: u8, y: u8) -> Option<usize> {
        self.entities.iter().position(|e| e.x == x && e.y == y)
    }

    /// Passable for movement: an Empty cell with no entity on it.
    pub fn is_free(&self, x: i64, y: i64) -> bool {
        self.in_bounds(x, y)
            && self.cell(x as u8, y as u8).is_passable()
            && self.entity_at(x as u8, y as u8).is_none()
    }

    pub fn gui_open(&self) -> bool {
        self.gui.is_some()
    }

    /// Cell the agent is facing, if in bounds.
    pub fn faced_cell(&self) -> Option<(u8, u8)> {
        let (dx, dy) = self.agent.facing.delta();
        let x = self.agent.x as i64 + dx;
        let y = self.agent.y as i64 + dy;
        if self.in_bounds(x, y) {
            Some((x as u8, y as u8))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }

    pub fn from_json(s: &str) -> Result<GridState, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Apply one raw token: the agent's effect, then entity motion, then the
/// tick increment. Rejects tokens that do not match the current GUI mode.
pub fn step(state: &GridState, raw: RawToken) -> Result<(GridState, Vec<Event>), WorldError> {
    if !raw.mode_valid(state.gui_open()) {
        return Err(WorldError::Mode(format!(
            "token {} is not valid in {} mode",
            raw.as_str(),
            if state.gui_open() { "GUI" } else { "embodied" }
        )));
    }

    let mut s = state.clone();
    let new_tick = s.tick + 1;
    let mut events = Vec::new();

    match raw {
        RawToken::Fwd => {
            let (dx, dy) = s.agent.facing.delta();
            let nx = s.agent.x as i64 + dx;
            let ny = s.agent.y as i64 + dy;
            if s.is_free(nx, ny) {
                s.agent.x = nx as u8;
                s.agent.y = ny as u8;
            }
        }
        RawToken::Left => s.agent.facing = s.agent.facing.turned_left(),
        RawToken::Right => s.agent.facing = s.agent.facing.turned_right(),
        RawToken::Atk => {
            if let Some((tx, ty)) = s.faced_cell() {
                if let Some(ei) = s.entity_at(tx, ty) {
                    s.entities[ei].hp -= 1;
                    if s.entities[ei].hp <= 0 {
                        events.push(Event {
                            kind: EventKind::EntityKilled(s.entities[ei].kind.clone()),
                            tick: new_tick,
                        });
                    }
                } else if let CellKind::Tree { species } = s.cell(tx, ty).clone() {
                    let idx = s.idx(tx, ty) as u16;
                    let hits = s.block_progress.get(&idx).copied().unwrap_or(0) + 1;
                    if hits >= TREE_HITS {
                        s.cells[idx as usize] = CellKind::Empty;
                        s.block_progress.remove(&idx);
                        events.push(Event {
                            kind: EventKind::BlockMined(species),
                            tick: new_tick,
                        });
                    } else {
                        s.block_progress.insert(idx, hits);
                    }
                }
            }
        }
        RawToken::Use => {
            if let Some((tx, ty)) = s.faced_cell() {
                if *s.cell(tx, ty) == CellKind::Table {
                    let icons = s
                        .crafting
                        .as_ref()
                        .map(|c| c.icons.clone())
                        .unwrap_or_else(empty_icons);
                    s.gui = Some(GuiState {
                        icons,
                        cursor: (0, 0),
                        selected: None,
                    });
                    events.push(Event {
                        kind: EventKind::GuiOpened,
                        tick: new_tick,
                    });
                }
            }
        }
        RawToken::CurUp | RawToken::CurDown | RawToken::CurLeft | RawToken::CurRight => {
            let gui = s.gui.as_mut().expect("mode checked");
            let (ci, cj) = gui.cursor;
            gui.cursor = match raw {
                RawToken::CurUp => (ci, cj.saturating_sub(1)),
                RawToken::CurDown => (ci, (cj + 1).min(GUI_ROWS - 1)),
                RawToken::CurLeft => (ci.saturating_sub(1), cj),
                RawToken::CurRight => ((ci + 1).min(GUI_COLS - 1), cj),
                _ => unreachable!(),
            };
        }
        RawToken::Clk => {
            let gui = s.gui.as_mut().expect("mode checked");
            let (ci, cj) = gui.cursor;
            if (ci, cj) == RESULT_SLOT {
                if let Some(craft) = &s.crafting {
                    if gui.selected.as_deref() == Some(craft.ingredient.as_str()) {
                        events.push(Event {
                            kind: EventKind::ItemCrafted(craft.output.clone()),
                            tick: new_tick,
                        });
                    }
                }
            } else if ci < 3 {
                gui.selected = Some(gui.icons[cj as usize][ci as usize].clone());
            }
        }
        RawToken::Esc => {
            s.gui = None;
            events.push(Event {
                kind: EventKind::GuiClosed,
                tick: new_tick,
            });
        }
        RawToken::Nop => {}
    }

    move_entities(&mut s);
    s.entities.retain(|e| e.hp > 0);
    s.tick = new_tick;
    Ok((s, events))
}

fn move_entities(s: &mut GridState) {
    let agent = (s.agent.x, s.agent.y);
    for i in 0..s.entities.len() {
        if s.entities[i].hp <= 0 {
            continue;
        }
        let gate: f64 = s.rng_stream.gen();
        if gate >= s.entities[i].move_prob {
            continue;
        }
        let (ex, ey) = (s.entities[i].x as i64, s.entities[i].y as i64);
        let dest = if s.entities[i].chases() {
            chase_step((ex, ey), (agent.0 as i64, agent.1 as i64), s)
        } else {
            let dir = Facing::ALL[s.rng_stream.gen_range(0..4)];
            let (dx, dy) = dir.delta();
            Some((ex + dx, ey + dy))
        };
        if let Some((nx, ny)) = dest {
            if s.is_free(nx, ny) && (nx, ny) != (agent.0 as i64, agent.1 as i64) {
                s.entities[i].x = nx as u8;
                s.entities[i].y = ny as u8;
            }
        }
    }
}

/// One chase step toward the agent: longer axis first (ties prefer x),
/// falling back to the other axis when blocked.
fn chase_step(from: (i64, i64), to: (i64, i64), s: &GridState) -> Option<(i64, i64)> {
    let dx = to.0 - from.0;
    let dy = to.1 - from.1;
    if dx == 0 && dy == 0 {
        return None;
    }
    let step_x = (from.0 + dx.signum(), from.1);
    let step_y = (from.0, from.1 + dy.signum());
    let order = if dx.abs() >= dy.abs() {
        [(dx != 0).then_some(step_x), (dy != 0).then_some(step_y)]
    } else {
        [(dy != 0).then_some(step_y), (dx != 0).then_some(step_x)]
    };
    for cand in order.into_iter().flatten() {
        if s.is_free(cand.0, cand.1) && cand != to {
            return Some(cand);
        }
    }
    None
}

fn empty_icons() -> [[String; 3]; 3] {
    std::array::from_fn(|_| std::array::from_fn(|_| "stone".to_string()))
}

/// Build the initial world for a task. Identical (task, seed) pairs yield
/// bit-identical states.
pub fn reset(task: &TaskSpec, seed: u64) -> Result<GridState, WorldError> {
    task.validate()?;
    let world_seed = seeding::derive_n(
        seed,
        "miniworld.reset",
        &[task.family.index() as u64, fnv_target(&task.target)],
    );
    let mut rng = seeding::rng(world_seed);

    let (w, h) = (task.grid_w, task.grid_h);
    let mut cells = vec![CellKind::Empty; w as usize * h as usize];
    for x in 0..w {
        for y in 0..h {
            if x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                cells[y as usize * w as usize + x as usize] = CellKind::Wall;
            }
        }
    }

    let mut state = GridState {
        schema_version: SCHEMA_VERSION,
        width: w,
        height: h,
        cells,
        agent: AgentPose {
            x: 1,
            y: 1,
            facing: Facing::E,
        },
        entities: Vec::new(),
        gui: None,
        tick: 0,
        block_progress: BTreeMap::new(),
        crafting: None,
        rng_stream: seeding::rng(seeding::derive(seed, "miniworld.entities")),
    };

    let interior = (w as usize - 2) * (h as usize - 2);
    let n_rocks = (interior / 16).max(1);
    for _ in 0..n_rocks {
        place_cell(&mut state, &mut rng, CellKind::Rock)?;
    }

    match task.family {
        TaskFamily::MineBlock => {
            let distractor = other_species(&task.target);
            for _ in 0..2 {
                place_cell(
                    &mut state,
                    &mut rng,
                    CellKind::Tree {
                        species: task.target.clone(),
                    },
                )?;
            }
            for _ in 0..2 {
                place_cell(
                    &mut state,
                    &mut rng,
                    CellKind::Tree {
                        species: distractor.to_string(),
                    },
                )?;
            }
        }
        TaskFamily::KillEntity => {
            // Distractor tree so the world is not featureless.
            place_cell(
                &mut state,
                &mut rng,
                CellKind::Tree {
                    species: "oak".to_string(),
                },
            )?;
        }
        TaskFamily::CraftItem => {
            place_cell(&mut state, &mut rng, CellKind::Table)?;
            let ingredient = recipe_ingredient(&task.target)
                .ok_or_else(|| WorldError::Task(format!("no recipe for {}", task.target)))?;
            state.crafting = Some(build_crafting(ingredient, &task.target, &mut rng));
        }
    }

    // Agent placement, then entities, all on distinct free cells.
    let (ax, ay) = free_cell(&state, &mut rng).ok_or(WorldError::Placement("agent".into()))?;
    state.agent = AgentPose {
        x: ax,
        y: ay,
        facing: Facing::ALL[rng.gen_range(0..4)],
    };

    if task.family == TaskFamily::KillEntity {
        let distractor = other_kind(&task.target);
        for kind in [task.target.as_str(), distractor] {
            let (ex, ey) =
                free_cell(&state, &mut rng).ok_or(WorldError::Placement("entity".into()))?;
            let chases = matches!(kind, "zombie" | "skeleton");
            state.entities.push(EntityState {
                kind: kind.to_string(),
                x: ex,
                y: ey,
                hp: ENTITY_HP,
                move_prob: if chases { 1.0 } else { 0.5 },
            });
        }
    }

    Ok(state)
}

fn fnv_target(t: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in t.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn other_species(target: &str) -> &'static str {
    TREE_SPECIES
        .iter()
        .copied()
        .find(|s| *s != target)
        .expect("more than one species")
}

fn other_kind(target: &str) -> &'static str {
    ENTITY_KINDS
        .iter()
        .copied()
        .find(|s| *s != target)
        .expect("more than one kind")
}

fn build_crafting(ingredient: &str, output: &str, rng: &mut ChaCha8Rng) -> CraftingSetup {
    // Ingredient goes to a random icon slot; the rest are distractors.
    let slot = rng.gen_range(0..9usize);
    let mut pool: Vec<&str> = ICON_POOL.iter().copied().filter(|i| *i != ingredient).collect();
    let mut icons = empty_icons();
    for cell in 0..9usize {
        let (row, col) = (cell / 3, cell % 3);
        if cell == slot {
            icons[row][col] = ingredient.to_string();
        } else {
            let pick = rng.gen_range(0..pool.len());
            icons[row][col] = pool.remove(pick).to_string();
        }
    }
    CraftingSetup {
        icons,
        ingredient: ingredient.to_string(),
        output: output.to_string(),
    }
}

fn place_cell(
    state: &mut GridState,
    rng: &mut ChaCha8Rng,
    kind: CellKind,
) -> Result<(), WorldError> {
    for _ in 0..256 {
        let x = rng.gen_range(1..state.width - 1);
        let y = rng.gen_range(1..state.height - 1);
        if *state.cell(x, y) == CellKind::Empty {
            let i = state.idx(x, y);
            state.cells[i] = kind;
            return Ok(());
        }
    }
    Err(WorldError::Placement(format!("{kind:?}")))
}

fn free_cell(state: &GridState, rng: &mut ChaCha8Rng) -> Option<(u8, u8)> {
    for _ in 0..256 {
        let x = rng.gen_range(1..state.width - 1);
        let y = rng.gen_range(1..state.height - 1);
        if state.cell(x, y).is_passable()
            && state.entity_at(x, y).is_none()
            && (x, y) != (state.agent.x, state.agent.y)
        {
            return Some((x, y));
        }
    }
    None
}

/// True iff the family's terminal event with the matching target occurred
/// within the task horizon.
pub fn check_success(events: &[Event], task: &TaskSpec) -> bool {
    events.iter().any(|e| {
        e.tick <= task.horizon_ticks
            && match (&e.kind, task.family) {
                (EventKind::BlockMined(t), TaskFamily::MineBlock) => *t == task.target,
                (EventKind::EntityKilled(t), TaskFamily::KillEntity) => *t == task.target,
                (EventKind::ItemCrafted(t), TaskFamily::CraftItem) => *t == task.target,
                _ => false,
            }
    })
}

// ---------------------------------------------------------------------------
// Observation encoding
// ---------------------------------------------------------------------------

/// Fixed-length symbolic observation. Layout (see `docs/FORMATS.md`):
/// agent x/y one-hots and scalars, facing, clipped relative offset to the
/// nearest task-relevant object plus its absolute position one-hots, the
/// faced cell kind, GUI flags and cursor one-hots, progress scalars, and
/// the task-family one-hot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub features: Vec<f64>,
}

pub const OBS_LEN: usize = 2 * MAX_GRID_DIM + 2 + 4 + 3 + 1 + 2 * MAX_GRID_DIM + 5 + 1 + 4 + 3 + 1 + 1 + 1 + 1 + 3;

const OFF_AX: usize = 0;
const OFF_AY: usize = OFF_AX + MAX_GRID_DIM;
const OFF_XY_SCALAR: usize = OFF_AY + MAX_GRID_DIM;
const OFF_FACING: usize = OFF_XY_SCALAR + 2;
const OFF_REL: usize = OFF_FACING + 4;
const OFF_DIST: usize = OFF_REL + 3;
const OFF_TX: usize = OFF_DIST + 1;
const OFF_TY: usize = OFF_TX + MAX_GRID_DIM;
const OFF_FACED: usize = OFF_TY + MAX_GRID_DIM;
const OFF_GUI: usize = OFF_FACED + 5;
const OFF_CUR_I: usize = OFF_GUI + 1;
const OFF_CUR_J: usize = OFF_CUR_I + 4;
const OFF_SELECTED: usize = OFF_CUR_J + 3;
const OFF_PROGRESS: usize = OFF_SELECTED + 1;
const OFF_HP: usize = OFF_PROGRESS + 1;
const OFF_TICK: usize = OFF_HP + 1;
const OFF_FAMILY: usize = OFF_TICK + 1;

/// Nearest task-relevant object for (state, task), with Manhattan distance.
/// In GUI mode this is a cursor-grid cell: the required ingredient icon, or
/// the result slot once the correct icon is selected.
pub fn nearest_relevant(state: &GridState, task: &TaskSpec) -> Option<((u8, u8), i64)> {
    if let Some(gui) = &state.gui {
        let craft = state.crafting.as_ref()?;
        let selected_ok = gui.selected.as_deref() == Some(craft.ingredient.as_str());
        let target = if selected_ok {
            RESULT_SLOT
        } else {
            let mut found = None;
            for row in 0..3u8 {
                for col in 0..3u8 {
                    if gui.icons[row as usize][col as usize] == craft.ingredient {
                        found = Some((col, row));
                    }
                }
            }
            found?
        };
        let d = (gui.cursor.0 as i64 - target.0 as i64).abs()
            + (gui.cursor.1 as i64 - target.1 as i64).abs();
        return Some((target, d));
    }

    let mut best: Option<((u8, u8), i64, (u8, u8))> = None;
    let mut consider = |x: u8, y: u8| {
        let d = (state.agent.x as i64 - x as i64).abs() + (state.agent.y as i64 - y as i64).abs();
        let key = (y, x);
        let better = match &best {
            None => true,
            Some((_, bd, bkey)) => d < *bd || (d == *bd && key < *bkey),
        };
        if better {
            best = Some(((x, y), d, key));
        }
    };
    match task.family {
        TaskFamily::MineBlock => {
            for y in 0..state.height {
                for x in 0..state.width {
                    if let CellKind::Tree { species } = state.cell(x, y) {
                        if *species == task.target {
                            consider(x, y);
                        }
                    }
                }
            }
        }
        TaskFamily::KillEntity => {
            for e in &state.entities {
                if e.kind == task.target && e.hp > 0 {
                    consider(e.x, e.y);
                }
            }
        }
        TaskFamily::CraftItem => {
            for y in 0..state.height {
                for x in 0..state.width {
                    if *state.cell(x, y) == CellKind::Table {
                        consider(x, y);
                    }
                }
            }
        }
    }
    best.map(|(pos, d, _)| (pos, d))
}

/// Deterministic feature encoding of (state, task). Always `OBS_LEN` long.
pub fn observe(state: &GridState, task: &TaskSpec) -> Observation {
    let mut f = vec![0.0; OBS_LEN];
    let max = (MAX_GRID_DIM - 1) as f64;

    f[OFF_AX + state.agent.x as usize] = 1.0;
    f[OFF_AY + state.agent.y as usize] = 1.0;
    f[OFF_XY_SCALAR] = state.agent.x as f64 / max;
    f[OFF_XY_SCALAR + 1] = state.agent.y as f64 / max;
    f[OFF_FACING + state.agent.facing.index()] = 1.0;

    let nearest = nearest_relevant(state, task);
    let in_gui = state.gui_open();
    let visible = match (&nearest, in_gui) {
        (Some(((x, y), _)), false) => {
            let dx = (*x as i64 - state.agent.x as i64).abs();
            let dy = (*y as i64 - state.agent.y as i64).abs();
            dx.max(dy) <= VIEW_RADIUS
        }
        (Some(_), true) => true,
        (None, _) => false,
    };
    if visible {
        let ((tx, ty), dist) = nearest.unwrap();
        let (ref_x, ref_y) = if in_gui {
            (state.gui.as_ref().unwrap().cursor.0, state.gui.as_ref().unwrap().cursor.1)
        } else {
            (state.agent.x, state.agent.y)
        };
        let dx = (tx as i64 - ref_x as i64).clamp(-VIEW_RADIUS, VIEW_RADIUS);
        let dy = (ty as i64 - ref_y as i64).clamp(-VIEW_RADIUS, VIEW_RADIUS);
        f[OFF_REL] = dx as f64 / VIEW_RADIUS as f64;
        f[OFF_REL + 1] = dy as f64 / VIEW_RADIUS as f64;
        f[OFF_REL + 2] = 1.0;
        f[OFF_DIST] = (dist as f64 / (2.0 * VIEW_RADIUS as f64)).min(1.0);
        f[OFF_TX + tx as usize] = 1.0;
        f[OFF_TY + ty as usize] = 1.0;
    } else {
        // Sentinel: offsets pinned to the clip value, no visibility flag.
        f[OFF_REL] = 1.0;
        f[OFF_REL + 1] = 1.0;
        f[OFF_DIST] = 1.0;
    }

    let faced_kind = match state.faced_cell() {
        Some((x, y)) => match state.cell(x, y) {
            CellKind::Empty => 0,
            CellKind::Tree { .. } => 1,
            CellKind::Rock => 2,
            CellKind::Table => 3,
            CellKind::Wall => 4,
        },
        None => 4,
    };
    f[OFF_FACED + faced_kind] = 1.0;

    if let Some(gui) = &state.gui {
        f[OFF_GUI] = 1.0;
        f[OFF_CUR_I + gui.cursor.0 as usize] = 1.0;
        f[OFF_CUR_J + gui.cursor.1 as usize] = 1.0;
        if let Some(craft) = &state.crafting {
            if gui.selected.as_deref() == Some(craft.ingredient.as_str()) {
                f[OFF_SELECTED] = 1.0;
            }
        }
    }

    f[OFF_PROGRESS] = match task.family {
        TaskFamily::MineBlock => nearest
            .map(|((x, y), _)| {
                let idx = state.idx(x, y) as u16;
                state.block_progress.get(&idx).copied().unwrap_or(0) as f64 / TREE_HITS as f64
            })
            .unwrap_or(0.0),
        TaskFamily::KillEntity => nearest
            .and_then(|((x, y), _)| state.entity_at(x, y))
            .map(|i| 1.0 - state.entities[i].hp as f64 / ENTITY_HP as f64)
            .unwrap_or(0.0),
        TaskFamily::CraftItem => {
            if f[OFF_SELECTED] > 0.0 {
                1.0
            } else if state.gui_open() {
                0.5
            } else {
                0.0
            }
        }
    };
    f[OFF_HP] = nearest
        .and_then(|((x, y), _)| if in_gui { None } else { state.entity_at(x, y) })
        .map(|i| state.entities[i].hp as f64 / ENTITY_HP as f64)
        .unwrap_or(0.0);
    f[OFF_TICK] = (state.tick as f64 / task.horizon_ticks as f64).min(1.0);
    f[OFF_FAMILY + task.family.index()] = 1.0;

    Observation { features: f }
}

// ---------------------------------------------------------------------------
// Task suites
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Targets per family for the ID suite (1 or 2).
    pub targets_per_family: usize,
    pub horizon_ticks: u64,
    pub max_turns: u32,
    pub id_grid: (u8, u8),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            targets_per_family: 2,
            horizon_ticks: 96,
            max_turns: 32,
            id_grid: (9, 9),
        }
    }
}

/// Fixed task suites. The ID suite uses the first `targets_per_family`
/// targets of each family; the OOD suite uses disjoint targets and grid
/// sizes not present in the ID suite. Deterministic in `seed` (the default
/// suites do not consume it).
pub fn sample_task_suite(split: Split, _seed: u64, cfg: &SuiteConfig) -> Vec<TaskSpec> {
    let k = cfg.targets_per_family.clamp(1, 2);
    let mk = |family: TaskFamily, target: &str, grid: (u8, u8), split: Split| TaskSpec {
        family,
        target: target.to_string(),
        grid_w: grid.0,
        grid_h: grid.1,
        horizon_ticks: cfg.horizon_ticks,
        max_turns: cfg.max_turns,
        split,
    };
    match split {
        Split::Id => {
            let mut out = Vec::new();
            for i in 0..k {
                out.push(mk(TaskFamily::MineBlock, TREE_SPECIES[i], cfg.id_grid, Split::Id));
            }
            for i in 0..k {
                out.push(mk(TaskFamily::KillEntity, ENTITY_KINDS[i], cfg.id_grid, Split::Id));
            }
            for i in 0..k {
                out.push(mk(TaskFamily::CraftItem, CRAFT_ITEMS[i], cfg.id_grid, Split::Id));
            }
            out
        }
        Split::Ood => {
            // Disjoint targets; grids 7x7 and 11x11 are never in the ID suite.
            vec![
                mk(TaskFamily::MineBlock, TREE_SPECIES[2], (7, 7), Split::Ood),
                mk(TaskFamily::MineBlock, TREE_SPECIES[3], (11, 11), Split::Ood),
                mk(TaskFamily::KillEntity, ENTITY_KINDS[2], (7, 7), Split::Ood),
                mk(TaskFamily::KillEntity, ENTITY_KINDS[3], (7, 7), Split::Ood),
                mk(TaskFamily::CraftItem, CRAFT_ITEMS[2], (7, 7), Split::Ood),
                mk(TaskFamily::CraftItem, CRAFT_ITEMS[3], (7, 7), Split::Ood),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blank_state(w: u8, h: u8) -> GridState {
        GridState {
            schema_version: SCHEMA_VERSION,
            width: w,
            height: h,
            cells: vec![CellKind::Empty; w as usize * h as usize],
            agent: AgentPose {
                x: 0,
                y: 0,
                facing: Facing::E,
            },
            entities: Vec::new(),
            gui: None,
            tick: 0,
            block_progress: BTreeMap::new(),
            crafting: None,
            rng_stream: seeding::rng(0),
        }
    }

    fn mine_task() -> TaskSpec {
        TaskSpec {
            family: TaskFamily::MineBlock,
            target: "oak".into(),
            grid_w: 9,
            grid_h: 9,
            horizon_ticks: 96,
            max_turns: 32,
            split: Split::Id,
        }
    }

    #[test]
    fn reset_mine_block_contains_target() {
        let task = TaskSpec {
            target: "oak".into(),
            ..mine_task()
        };
        let s = reset(&task, 7).unwrap();
        assert_eq!((s.width, s.height), (9, 9));
        assert_eq!(s.tick, 0);
        let oaks = s
            .cells
            .iter()
            .filter(|c| matches!(c, CellKind::Tree { species } if species == "oak"))
            .count();
        assert!(oaks >= 1);
        assert!(s.cell(s.agent.x, s.agent.y).is_passable());
    }

    #[test]
    fn reset_craft_has_exactly_one_table() {
        let task = TaskSpec {
            family: TaskFamily::CraftItem,
            target: "torch".into(),
            ..mine_task()
        };
        let s = reset(&task, 0).unwrap();
        let tables = s.cells.iter().filter(|c| **c == CellKind::Table).count();
        assert_eq!(tables, 1);
        assert!(s.crafting.is_some());
    }

    #[test]
    fn reset_is_deterministic() {
        let task = mine_task();
        let a = reset(&task, 42).unwrap();
        let b = reset(&task, 42).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = reset(&task, 43).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn reset_rejects_bad_target() {
        let task = TaskSpec {
            target: "diamond".into(),
            ..mine_task()
        };
        assert!(reset(&task, 0).is_err());
    }

    #[test]
    fn fwd_moves_into_empty_cell() {
        let mut s = blank_state(3, 1);
        s.agent = AgentPose {
            x: 0,
            y: 0,
            facing: Facing::E,
        };
        let (s2, ev) = step(&s, RawToken::Fwd).unwrap();
        assert_eq!((s2.agent.x, s2.agent.y), (1, 0));
        assert!(ev.is_empty());
        assert_eq!(s2.tick, 1);
    }

    #[test]
    fn fwd_blocked_by_wall_and_bounds() {
        let mut s = blank_state(2, 1);
        s.cells[1] = CellKind::Wall;
        let (s2, _) = step(&s, RawToken::Fwd).unwrap();
        assert_eq!((s2.agent.x, s2.agent.y), (0, 0));
        s.agent.facing = Facing::W; // off-grid
        let (s3, _) = step(&s, RawToken::Fwd).unwrap();
        assert_eq!((s3.agent.x, s3.agent.y), (0, 0));
    }

    #[test]
    fn atk_breaks_tree_at_two_hits() {
        let mut s = blank_state(2, 1);
        s.cells[1] = CellKind::Tree {
            species: "oak".into(),
        };
        s.block_progress.insert(1, 1);
        let (s2, ev) = step(&s, RawToken::Atk).unwrap();
        assert_eq!(*s2.cell(1, 0), CellKind::Empty);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::BlockMined("oak".into()));
        assert!(s2.block_progress.is_empty());
    }

    #[test]
    fn atk_first_hit_only_marks_progress() {
        let mut s = blank_state(2, 1);
        s.cells[1] = CellKind::Tree {
            species: "oak".into(),
        };
        let (s2, ev) = step(&s, RawToken::Atk).unwrap();
        assert!(ev.is_empty());
        assert_eq!(s2.block_progress.get(&1), Some(&1));
        assert!(matches!(s2.cell(1, 0), CellKind::Tree { .. }));
    }

    #[test]
    fn atk_kills_entity_at_zero_hp() {
        let mut s = blank_state(3, 1);
        s.entities.push(EntityState {
            kind: "sheep".into(),
            x: 1,
            y: 0,
            hp: 1,
            move_prob: 0.0,
        });
        let (s2, ev) = step(&s, RawToken::Atk).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::EntityKilled("sheep".into()));
        assert!(s2.entities.is_empty());
    }

    #[test]
    fn gui_craft_automaton_by_hand() {
        // Simulate the stated GUI automaton: open, select the ingredient,
        // move to the result slot, click.
        let mut s = blank_state(3, 1);
        s.cells[1] = CellKind::Table;
        let mut icons = empty_icons();
        icons[0][1] = "coal".into(); // row 0, col 1
        s.crafting = Some(CraftingSetup {
            icons,
            ingredient: "coal".into(),
            output: "torch".into(),
        });

        let (s, ev) = step(&s, RawToken::Use).unwrap();
        assert_eq!(ev[0].kind, EventKind::GuiOpened);
        assert!(s.gui_open());
        assert_eq!(s.gui.as_ref().unwrap().cursor, (0, 0));

        let (s, _) = step(&s, RawToken::CurRight).unwrap(); // cursor (1,0): coal
        let (s, ev) = step(&s, RawToken::Clk).unwrap();
        assert!(ev.is_empty());
        assert_eq!(s.gui.as_ref().unwrap().selected.as_deref(), Some("coal"));

        let (s, _) = step(&s, RawToken::CurRight).unwrap(); // (2,0)
        let (s, _) = step(&s, RawToken::CurRight).unwrap(); // (3,0)
        let (s, _) = step(&s, RawToken::CurDown).unwrap(); // (3,1) result
        let (s, ev) = step(&s, RawToken::Clk).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::ItemCrafted("torch".into()));

        let (s, ev) = step(&s, RawToken::Esc).unwrap();
        assert_eq!(ev[0].kind, EventKind::GuiClosed);
        assert!(!s.gui_open());
    }

    #[test]
    fn wrong_selection_does_not_craft() {
        let mut s = blank_state(3, 1);
        s.cells[1] = CellKind::Table;
        s.crafting = Some(CraftingSetup {
            icons: empty_icons(), // all stone
            ingredient: "coal".into(),
            output: "torch".into(),
        });
        let (s, _) = step(&s, RawToken::Use).unwrap();
        let (s, _) = step(&s, RawToken::Clk).unwrap(); // selects stone
        let mut s = s;
        s.gui.as_mut().unwrap().cursor = RESULT_SLOT;
        let (_, ev) = step(&s, RawToken::Clk).unwrap();
        assert!(ev.is_empty());
    }

    #[test]
    fn cursor_clamps_at_bounds() {
        let mut s = blank_state(2, 1);
        s.gui = Some(GuiState {
            icons: empty_icons(),
            cursor: (0, 0),
            selected: None,
        });
        let (s2, _) = step(&s, RawToken::CurLeft).unwrap();
        assert_eq!(s2.gui.as_ref().unwrap().cursor, (0, 0));
        let (s3, _) = step(&s2, RawToken::CurUp).unwrap();
        assert_eq!(s3.gui.as_ref().unwrap().cursor, (0, 0));
        let mut far = s;
        far.gui.as_mut().unwrap().cursor = (3, 2);
        let (s4, _) = step(&far, RawToken::CurRight).unwrap();
        assert_eq!(s4.gui.as_ref().unwrap().cursor, (3, 2));
        let (s5, _) = step(&s4, RawToken::CurDown).unwrap();
        assert_eq!(s5.gui.as_ref().unwrap().cursor, (3, 2));
    }

    #[test]
    fn mode_exclusivity() {
        let s = blank_state(3, 1);
        assert!(matches!(step(&s, RawToken::Clk), Err(WorldError::Mode(_))));
        let mut g = blank_state(3, 1);
        g.gui = Some(GuiState {
            icons: empty_icons(),
            cursor: (0, 0),
            selected: None,
        });
        assert!(matches!(step(&g, RawToken::Fwd), Err(WorldError::Mode(_))));
        // nop is valid in both modes.
        assert!(step(&s, RawToken::Nop).is_ok());
        assert!(step(&g, RawToken::Nop).is_ok());
    }

    #[test]
    fn replay_is_bit_identical_and_ticks_are_monotone() {
        let task = TaskSpec {
            family: TaskFamily::KillEntity,
            target: "sheep".into(),
            ..mine_task()
        };
        let tokens = [
            RawToken::Fwd,
            RawToken::Right,
            RawToken::Atk,
            RawToken::Fwd,
            RawToken::Nop,
            RawToken::Left,
            RawToken::Fwd,
            RawToken::Atk,
        ];
        let run = |seed: u64| {
            let mut s = reset(&task, seed).unwrap();
            let mut all = Vec::new();
            for t in tokens {
                let before = s.tick;
                let (s2, ev) = step(&s, t).unwrap();
                assert_eq!(s2.tick, before + 1);
                all.extend(ev);
                s = s2;
            }
            (s.to_json(), all)
        };
        let (a_state, a_events) = run(5);
        let (b_state, b_events) = run(5);
        assert_eq!(a_state, b_state);
        assert_eq!(a_events, b_events);
    }

    #[test]
    fn conservation_of_non_wall_cells() {
        let task = mine_task();
        let mut s = reset(&task, 3).unwrap();
        let non_wall = |s: &GridState| s.cells.iter().filter(|c| **c != CellKind::Wall).count();
        let before = non_wall(&s);
        for t in [RawToken::Atk, RawToken::Fwd, RawToken::Atk, RawToken::Right, RawToken::Atk] {
            let (s2, _) = step(&s, t).unwrap();
            s = s2;
        }
        assert_eq!(non_wall(&s), before);
    }

    #[test]
    fn check_success_matches_family_and_target() {
        let task = mine_task();
        let ev = |kind: EventKind| Event { kind, tick: 1 };
        assert!(check_success(&[ev(EventKind::BlockMined("oak".into()))], &task));
        assert!(!check_success(&[ev(EventKind::BlockMined("birch".into()))], &task));
        assert!(!check_success(&[], &task));
        let kill = TaskSpec {
            family: TaskFamily::KillEntity,
            target: "zombie".into(),
            ..mine_task()
        };
        assert!(!check_success(&[ev(EventKind::EntityKilled("sheep".into()))], &kill));
        // Event outside the horizon does not count.
        let late = Event {
            kind: EventKind::BlockMined("oak".into()),
            tick: task.horizon_ticks + 1,
        };
        assert!(!check_success(&[late], &task));
    }

    #[test]
    fn observe_is_deterministic_with_fixed_length() {
        let task = mine_task();
        let s = reset(&task, 11).unwrap();
        let a = observe(&s, &task);
        let b = observe(&s, &task);
        assert_eq!(a, b);
        assert_eq!(a.features.len(), OBS_LEN);
        assert!(a.features.iter().all(|v| v.is_finite()));
        // GUI flag reflects gui presence.
        assert_eq!(a.features[OFF_GUI], 0.0);
    }

    #[test]
    fn observe_sentinel_when_target_out_of_view() {
        let mut s = blank_state(11, 11);
        s.agent = AgentPose {
            x: 0,
            y: 0,
            facing: Facing::E,
        };
        let i = s.idx(10, 10);
        s.cells[i] = CellKind::Tree {
            species: "oak".into(),
        };
        let task = TaskSpec {
            grid_w: 11,
            grid_h: 11,
            ..mine_task()
        };
        let obs = observe(&s, &task);
        assert_eq!(obs.features[OFF_REL], 1.0);
        assert_eq!(obs.features[OFF_REL + 1], 1.0);
        assert_eq!(obs.features[OFF_REL + 2], 0.0);
        assert_eq!(obs.features[OFF_DIST], 1.0);
    }

    #[test]
    fn suites_are_disjoint_and_sized() {
        let cfg = SuiteConfig::default();
        let id = sample_task_suite(Split::Id, 0, &cfg);
        let ood = sample_task_suite(Split::Ood, 0, &cfg);
        assert_eq!(id.len(), 6);
        for t in &id {
            assert!(!ood.iter().any(|o| o.target == t.target));
        }
        let id_sizes: Vec<_> = id.iter().map(|t| (t.grid_w, t.grid_h)).collect();
        assert!(ood.iter().any(|o| !id_sizes.contains(&(o.grid_w, o.grid_h))));
        for t in id.iter().chain(ood.iter()) {
            assert!(t.validate().is_ok());
        }
    }

    #[test]
    fn entities_move_only_through_free_cells() {
        let task = TaskSpec {
            family: TaskFamily::KillEntity,
            target: "zombie".into(),
            ..mine_task()
        };
        let mut s = reset(&task, 1).unwrap();
        for _ in 0..40 {
            let (s2, _) = step(&s, RawToken::Nop).unwrap();
            for e in &s2.entities {
                assert!(s2.cell(e.x, e.y).is_passable());
                assert_ne!((e.x, e.y), (s2.agent.x, s2.agent.y));
            }
            let mut pos: Vec<_> = s2.entities.iter().map(|e| (e.x, e.y)).collect();
            pos.sort_unstable();
            pos.dedup();
            assert_eq!(pos.len(), s2.entities.len());
            s = s2;
        }
    }

    #[test]
    fn state_json_round_trip() {
        let task = mine_task();
        let s = reset(&task, 9).unwrap();
        let j = s.to_json();
        let back = GridState::from_json(&j).unwrap();
        assert_eq!(s, back);
        assert_eq!(j, back.to_json());
    }
}
