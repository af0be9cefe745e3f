//! Domain types for annotated discourse and centering state.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Index of an entity in its discourse's entity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub name: String,
    pub types: BTreeSet<String>,
    /// 1 for individuals, more for pluralities.
    pub cardinality: u32,
}

/// Grammatical salience for Japanese, most salient first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Topic,
    Empathy,
    Subject,
    Object2,
    Object,
    Others,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::Topic,
        Role::Empathy,
        Role::Subject,
        Role::Object2,
        Role::Object,
        Role::Others,
    ];

    /// 0 for TOPIC up to 5 for OTHERS.
    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn tag(self) -> &'static str {
        match self {
            Role::Topic => "TOPIC",
            Role::Empathy => "EMPATHY",
            Role::Subject => "SUBJECT",
            Role::Object2 => "OBJECT2",
            Role::Object => "OBJECT",
            Role::Others => "OTHERS",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Role> {
        Role::ALL.iter().copied().find(|r| r.tag() == tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Overt,
    Zero,
}

impl Form {
    pub fn tag(self) -> &'static str {
        match self {
            Form::Overt => "OVERT",
            Form::Zero => "ZERO",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Form> {
        match tag {
            "OVERT" => Some(Form::Overt),
            "ZERO" => Some(Form::Zero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tense {
    Past,
    NonPast,
}

impl Tense {
    pub fn tag(self) -> &'static str {
        match self {
            Tense::Past => "PAST",
            Tense::NonPast => "NONPAST",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Tense> {
        match tag {
            "PAST" => Some(Tense::Past),
            "NONPAST" => Some(Tense::NonPast),
            _ => None,
        }
    }
}

/// What a zero (or a gold annotation) refers to: one entity or a set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Antecedent {
    Entity(EntityId),
    Group(Vec<EntityId>),
}

impl Antecedent {
    pub fn members(&self) -> &[EntityId] {
        match self {
            Antecedent::Entity(id) => core::slice::from_ref(id),
            Antecedent::Group(ids) => ids,
        }
    }

    /// Set equality; group member order is irrelevant.
    pub fn same_referent(&self, other: &Antecedent) -> bool {
        let a: BTreeSet<_> = self.members().iter().collect();
        let b: BTreeSet<_> = other.members().iter().collect();
        a == b
    }
}

/// Cue annotations carried by a zero slot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Constraints {
    /// Semantic types the verb slot selects for; empty means unconstrained.
    pub compatible_types: BTreeSet<String>,
    pub required_cardinality: Option<u32>,
    /// Evaluation only. Resolution code never reads this.
    pub gold: Option<Antecedent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferringExpression {
    /// `None` for an unresolved zero.
    pub entity: Option<EntityId>,
    pub form: Form,
    pub role: Role,
    pub wa: bool,
    pub ga: bool,
    pub position: u32,
    pub constraints: Option<Constraints>,
}

impl ReferringExpression {
    pub fn overt(entity: EntityId, role: Role, position: u32) -> Self {
        ReferringExpression {
            entity: Some(entity),
            form: Form::Overt,
            role,
            wa: role == Role::Topic,
            ga: false,
            position,
            constraints: None,
        }
    }

    pub fn zero(role: Role, position: u32, constraints: Constraints) -> Self {
        ReferringExpression {
            entity: None,
            form: Form::Zero,
            role,
            wa: false,
            ga: false,
            position,
            constraints: Some(constraints),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.form == Form::Zero
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub index: usize,
    pub expressions: Vec<ReferringExpression>,
    pub tense: Tense,
    pub text: Option<String>,
}

impl Utterance {
    pub fn has_zero(&self) -> bool {
        self.expressions.iter().any(ReferringExpression::is_zero)
    }

    /// Indices of zero expressions, most salient role first, then surface order.
    pub fn zero_order(&self) -> Vec<usize> {
        let mut zeros: Vec<usize> = (0..self.expressions.len())
            .filter(|&i| self.expressions[i].is_zero())
            .collect();
        zeros.sort_by_key(|&i| (self.expressions[i].role, self.expressions[i].position));
        zeros
    }

    pub fn overt_entities(&self) -> BTreeSet<EntityId> {
        self.expressions
            .iter()
            .filter(|e| e.form == Form::Overt)
            .filter_map(|e| e.entity)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Discourse {
    pub id: String,
    pub entities: Vec<Entity>,
    pub utterances: Vec<Utterance>,
}

impl Discourse {
    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.index()]
    }

    pub fn name(&self, id: EntityId) -> &str {
        &self.entities[id.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<EntityId> {
        self.entities
            .iter()
            .position(|e| e.name == name)
            .map(|i| EntityId(i as u32))
    }
}

/// Centering transition between adjacent utterances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    Continue,
    ZtaContinue,
    Retain,
    SmoothShift,
    /// Also the no-Cb case.
    RoughShift,
}

impl Transition {
    pub const ALL: [Transition; 5] = [
        Transition::Continue,
        Transition::ZtaContinue,
        Transition::Retain,
        Transition::SmoothShift,
        Transition::RoughShift,
    ];

    /// Lower is more coherent; ZTA-CONTINUE ties with CONTINUE.
    pub fn preference(self) -> u8 {
        match self {
            Transition::Continue | Transition::ZtaContinue => 1,
            Transition::Retain => 2,
            Transition::SmoothShift => 3,
            Transition::RoughShift => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Transition::Continue => "CONTINUE",
            Transition::ZtaContinue => "ZTA-CONTINUE",
            Transition::Retain => "RETAIN",
            Transition::SmoothShift => "SMOOTH-SHIFT",
            Transition::RoughShift => "ROUGH-SHIFT",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Transition> {
        Transition::ALL.iter().copied().find(|t| t.tag() == tag)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One ranked member of a Cf list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CfEntry {
    pub entity: EntityId,
    pub role: Role,
    /// Placed at the head by Zero Topic Assignment (ranks above TOPIC).
    pub zero_topic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cue {
    Lexical,
    Tense,
    Agreement,
}

impl Cue {
    pub fn tag(self) -> &'static str {
        match self {
            Cue::Lexical => "LEXICAL",
            Cue::Tense => "TENSE",
            Cue::Agreement => "AGREEMENT",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Cue> {
        [Cue::Lexical, Cue::Tense, Cue::Agreement]
            .into_iter()
            .find(|c| c.tag() == tag)
    }
}

/// Cues that decided a global retrieval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct CueSet {
    pub lexical: bool,
    pub tense: bool,
    pub agreement: bool,
}

impl CueSet {
    pub fn insert(&mut self, cue: Cue) {
        match cue {
            Cue::Lexical => self.lexical = true,
            Cue::Tense => self.tense = true,
            Cue::Agreement => self.agreement = true,
        }
    }

    pub fn contains(&self, cue: Cue) -> bool {
        match cue {
            Cue::Lexical => self.lexical,
            Cue::Tense => self.tense,
            Cue::Agreement => self.agreement,
        }
    }

    pub fn union(mut self, other: CueSet) -> CueSet {
        self.lexical |= other.lexical;
        self.tense |= other.tense;
        self.agreement |= other.agreement;
        self
    }

    pub fn is_empty(&self) -> bool {
        !(self.lexical || self.tense || self.agreement)
    }

    pub fn iter(&self) -> impl Iterator<Item = Cue> + '_ {
        [Cue::Lexical, Cue::Tense, Cue::Agreement]
            .into_iter()
            .filter(|c| self.contains(*c))
    }
}

/// An invariant violation found by [`validate_discourse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateEntity { name: String },
    EmptyTypes { entity: String },
    ZeroCardinality { entity: String },
    UtteranceIndex { position: usize, index: usize },
    MultipleTopics { utterance: usize },
    WaGaConflict { utterance: usize, expression: usize },
    TopicWithoutWa { utterance: usize, expression: usize },
    NonMonotonePosition { utterance: usize, expression: usize },
    OvertUnresolved { utterance: usize, expression: usize },
    ConstraintsOnOvert { utterance: usize, expression: usize },
    ZeroRequiredCardinality { utterance: usize, expression: usize },
    UnknownEntity { utterance: usize, expression: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateEntity { name } => write!(f, "duplicate entity id `{name}`"),
            Violation::EmptyTypes { entity } => write!(f, "entity `{entity}` has no semantic types"),
            Violation::ZeroCardinality { entity } => {
                write!(f, "entity `{entity}` has cardinality 0")
            }
            Violation::UtteranceIndex { position, index } => {
                write!(f, "utterance at position {position} carries index {index}")
            }
            Violation::MultipleTopics { utterance } => {
                write!(f, "utterance {utterance} has more than one TOPIC expression")
            }
            Violation::WaGaConflict { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} is both wa- and ga-marked"
            ),
            Violation::TopicWithoutWa { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} is TOPIC but not wa-marked"
            ),
            Violation::NonMonotonePosition { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} breaks surface order"
            ),
            Violation::OvertUnresolved { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} is an overt NP without an entity"
            ),
            Violation::ConstraintsOnOvert { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} is overt but carries zero constraints"
            ),
            Violation::ZeroRequiredCardinality { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} requires cardinality 0"
            ),
            Violation::UnknownEntity { utterance, expression } => write!(
                f,
                "utterance {utterance} expression {expression} references an unknown entity"
            ),
        }
    }
}

/// Every invariant violation in `d`; empty iff well-formed.
pub fn validate_discourse(d: &Discourse) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for e in &d.entities {
        if !seen.insert(e.name.as_str()) {
            out.push(Violation::DuplicateEntity {
                name: e.name.clone(),
            });
        }
        if e.types.is_empty() {
            out.push(Violation::EmptyTypes {
                entity: e.name.clone(),
            });
        }
        if e.cardinality == 0 {
            out.push(Violation::ZeroCardinality {
                entity: e.name.clone(),
            });
        }
    }

    let known = |id: EntityId| id.index() < d.entities.len();
    for (pos, u) in d.utterances.iter().enumerate() {
        if u.index != pos {
            out.push(Violation::UtteranceIndex {
                position: pos,
                index: u.index,
            });
        }
        let ui = u.index;
        if u.expressions
            .iter()
            .filter(|e| e.role == Role::Topic)
            .count()
            > 1
        {
            out.push(Violation::MultipleTopics { utterance: ui });
        }
        let mut last: Option<u32> = None;
        for (xi, x) in u.expressions.iter().enumerate() {
            let at = (ui, xi);
            if x.wa && x.ga {
                out.push(Violation::WaGaConflict {
                    utterance: at.0,
                    expression: at.1,
                });
            }
            if x.role == Role::Topic && !x.wa {
                out.push(Violation::TopicWithoutWa {
                    utterance: at.0,
                    expression: at.1,
                });
            }
            if last.is_some_and(|p| x.position <= p) {
                out.push(Violation::NonMonotonePosition {
                    utterance: at.0,
                    expression: at.1,
                });
            }
            last = Some(x.position);
            match x.form {
                Form::Overt => {
                    if x.entity.is_none() {
                        out.push(Violation::OvertUnresolved {
                            utterance: at.0,
                            expression: at.1,
                        });
                    }
                    if x.constraints.is_some() {
                        out.push(Violation::ConstraintsOnOvert {
                            utterance: at.0,
                            expression: at.1,
                        });
                    }
                }
                Form::Zero => {
                    if x.constraints.as_ref().and_then(|c| c.required_cardinality) == Some(0) {
                        out.push(Violation::ZeroRequiredCardinality {
                            utterance: at.0,
                            expression: at.1,
                        });
                    }
                }
            }
            let gold_ids = x
                .constraints
                .as_ref()
                .and_then(|c| c.gold.as_ref())
                .map(|g| g.members().to_vec())
                .unwrap_or_default();
            if x.entity.into_iter().chain(gold_ids).any(|id| !known(id)) {
                out.push(Violation::UnknownEntity {
                    utterance: at.0,
                    expression: at.1,
                });
            }
        }
    }
    out
}
