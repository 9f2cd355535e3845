//! Parser and interpreter for the scripted case tables in `cases.txt`.

use std::sync::OnceLock;

use rustc_hash::FxHashMap;

use super::{stages::Stages, Decision, EngineError, Mode, Op};
use crate::board::{Board, Vertex};
use crate::graph::Colour;
use crate::rules::StartTag;

const CASES: &str = include_str!("cases.txt");

/// Maximum local label in a script.
pub const LABELS: usize = 16;

type Label = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Force(Vec<(Label, Label)>),
    Contract(Vec<Label>, usize),
    Residual(StartTag, Vec<Label>),
    Goto(usize, Option<Vec<Label>>),
    Select((Label, Label), usize, usize),
    Stage2,
}

#[derive(Clone, Debug)]
pub struct Block {
    pub program: String,
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub struct Script {
    pub blocks: Vec<Block>,
    pub entries: FxHashMap<String, usize>,
}

impl Script {
    pub fn entry(&self, name: &str) -> usize {
        self.entries[name]
    }
}

pub fn script() -> &'static Script {
    static S: OnceLock<Script> = OnceLock::new();
    S.get_or_init(|| parse(CASES).expect("bundled case script parses"))
}

struct Parser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
    blocks: Vec<Block>,
    gotos: Vec<(usize, usize, String)>,
    program: String,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, String> {
        let t = self.peek().ok_or("unexpected end of script")?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<(), String> {
        let t = self.next()?;
        if t != want {
            return Err(format!("expected `{want}`, found `{t}`"));
        }
        Ok(())
    }

    fn labels(&mut self) -> Result<Vec<Label>, String> {
        let mut v = Vec::new();
        while let Some(Ok(x)) = self.peek().map(str::parse::<Label>) {
            if x as usize >= LABELS {
                return Err(format!("label {x} out of range"));
            }
            v.push(x);
            self.pos += 1;
        }
        Ok(v)
    }

    fn edge(tok: &str) -> Option<(Label, Label)> {
        let (a, b) = tok.split_once('-')?;
        let (a, b) = (a.parse().ok()?, b.parse().ok()?);
        ((a as usize) < LABELS && (b as usize) < LABELS && a != b).then_some((a, b))
    }

    fn block(&mut self) -> Result<usize, String> {
        let id = self.blocks.len();
        self.blocks.push(Block {
            program: self.program.clone(),
            stmts: Vec::new(),
        });
        let mut stmts = Vec::new();
        loop {
            let t = self.next()?;
            let stmt = match t {
                "}" => break,
                "force" => {
                    let mut es = Vec::new();
                    while let Some(e) = self.peek().and_then(Self::edge) {
                        es.push(e);
                        self.pos += 1;
                    }
                    if es.is_empty() {
                        return Err("`force` without edges".into());
                    }
                    Stmt::Force(es)
                }
                "contract" => {
                    let path = self.labels()?;
                    let m = self
                        .next()?
                        .strip_prefix("m=")
                        .and_then(|x| x.parse().ok())
                        .ok_or("`contract` needs m=<count>")?;
                    if path.len() < 3 {
                        return Err("contracted path needs an interior".into());
                    }
                    Stmt::Contract(path, m)
                }
                "residual" => {
                    let tag: StartTag = self.next()?.parse().map_err(|e| format!("{e}"))?;
                    let order = self.labels()?;
                    let want = tag.edges();
                    let top = want.0.iter().chain(want.1).map(|e| e.1.max(e.0)).max();
                    if top.map_or(0, |t| t as usize + 1) != order.len() {
                        return Err(format!("residual {tag} lists {} vertices", order.len()));
                    }
                    Stmt::Residual(tag, order)
                }
                "goto" => {
                    let name = self.next()?.to_string();
                    let map = self.labels()?;
                    self.gotos.push((id, stmts.len(), name));
                    Stmt::Goto(usize::MAX, (!map.is_empty()).then_some(map))
                }
                "select" => {
                    let e = Self::edge(self.next()?).ok_or("`select` needs an edge a-b")?;
                    let mut branch = [None, None];
                    for _ in 0..2 {
                        let side = match self.next()? {
                            "red" => 0,
                            "blue" => 1,
                            t => return Err(format!("expected red/blue branch, found `{t}`")),
                        };
                        self.expect("{")?;
                        if branch[side].replace(self.block()?).is_some() {
                            return Err("duplicate branch".into());
                        }
                    }
                    Stmt::Select(e, branch[0].unwrap(), branch[1].unwrap())
                }
                "stage2" => Stmt::Stage2,
                t => return Err(format!("unknown statement `{t}`")),
            };
            let terminal = matches!(
                stmt,
                Stmt::Residual(..) | Stmt::Goto(..) | Stmt::Select(..) | Stmt::Stage2
            );
            stmts.push(stmt);
            if terminal {
                self.expect("}")?;
                break;
            }
        }
        if !matches!(
            stmts.last(),
            Some(Stmt::Residual(..) | Stmt::Goto(..) | Stmt::Select(..) | Stmt::Stage2)
        ) {
            return Err(format!(
                "block in `{}` has no terminal statement",
                self.program
            ));
        }
        self.blocks[id].stmts = stmts;
        Ok(id)
    }
}

pub fn parse(text: &str) -> Result<Script, String> {
    let cleaned: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
        .replace('{', " { ")
        .replace('}', " } ");
    let mut p = Parser {
        toks: cleaned.split_whitespace().collect(),
        pos: 0,
        blocks: Vec::new(),
        gotos: Vec::new(),
        program: String::new(),
    };
    let mut entries = FxHashMap::default();
    while let Some(name) = p.peek() {
        p.pos += 1;
        p.program = name.to_string();
        p.expect("{")?;
        let id = p.block()?;
        if entries.insert(name.to_string(), id).is_some() {
            return Err(format!("program `{name}` defined twice"));
        }
    }
    for (block, idx, name) in std::mem::take(&mut p.gotos) {
        let target = *entries
            .get(&name)
            .ok_or_else(|| format!("goto to unknown program `{name}`"))?;
        if let Stmt::Goto(t, _) = &mut p.blocks[block].stmts[idx] {
            *t = target;
        }
    }
    Ok(Script {
        blocks: p.blocks,
        entries,
    })
}

/// Position of an interpreter inside the script.
#[derive(Clone, Debug)]
pub struct Cursor {
    block: usize,
    idx: usize,
    labels: [Option<Vertex>; LABELS],
    pending: Option<(usize, usize)>,
}

impl Cursor {
    pub fn new(program: &str, bound: &[Vertex]) -> Cursor {
        let mut labels = [None; LABELS];
        for (slot, &v) in labels.iter_mut().zip(bound) {
            *slot = Some(v);
        }
        Cursor {
            block: script().entry(program),
            idx: 0,
            labels,
            pending: None,
        }
    }

    pub fn program(&self) -> &'static str {
        &script().blocks[self.block].program
    }

    fn bound(&self, l: Label) -> Result<Vertex, EngineError> {
        self.labels[l as usize].ok_or_else(|| {
            EngineError::Script(format!("label {l} unbound in `{}`", self.program()))
        })
    }

    fn map(&self, ls: &[Label]) -> Result<Vec<Vertex>, EngineError> {
        ls.iter().map(|&l| self.bound(l)).collect()
    }

    pub(super) fn decide(
        &mut self,
        view: &Board,
        next_fresh: Vertex,
        n: usize,
    ) -> Result<Decision, EngineError> {
        let s = script();
        loop {
            let block = &s.blocks[self.block];
            let stmt = block.stmts.get(self.idx).ok_or_else(|| {
                EngineError::Script(format!("`{}` ran past its end", block.program))
            })?;
            self.idx += 1;
            match stmt {
                Stmt::Force(es) => {
                    let ops = es
                        .iter()
                        .map(|&(a, b)| Ok(Op::Force(self.bound(a)?, self.bound(b)?)))
                        .collect::<Result<_, EngineError>>()?;
                    return Ok(Decision::Ops(ops));
                }
                Stmt::Contract(path, m) => {
                    return Ok(Decision::Ops(vec![Op::Contract {
                        path: self.map(path)?,
                        m: *m,
                        branch: block.program.clone(),
                    }]));
                }
                Stmt::Residual(tag, order) => {
                    return Ok(Decision::Ops(vec![Op::Residual {
                        tag: *tag,
                        order: self.map(order)?,
                    }]));
                }
                Stmt::Goto(target, map) => {
                    if let Some(map) = map {
                        let mut next = [None; LABELS];
                        for (i, &l) in map.iter().enumerate() {
                            next[i] = Some(self.bound(l)?);
                        }
                        self.labels = next;
                    }
                    self.block = *target;
                    self.idx = 0;
                }
                &Stmt::Select((a, b), red, blue) => {
                    let mut fresh = next_fresh;
                    for l in [a, b] {
                        if self.labels[l as usize].is_none() {
                            self.labels[l as usize] = Some(fresh);
                            fresh += 1;
                        }
                    }
                    let edge = (self.bound(a)?, self.bound(b)?);
                    if view.colour_of(edge.0, edge.1).is_some() {
                        return Err(EngineError::Script(format!(
                            "`{}` selects coloured edge {}-{}",
                            block.program, edge.0, edge.1
                        )));
                    }
                    self.pending = Some((red, blue));
                    let phase = if block.program == "stage1" {
                        "stage1"
                    } else {
                        "script"
                    };
                    return Ok(Decision::Select(edge, phase));
                }
                Stmt::Stage2 => {
                    let mut u = [0; 8];
                    for (i, slot) in u.iter_mut().enumerate() {
                        *slot = self.bound(i as Label)?;
                    }
                    return Ok(Decision::Switch(Mode::Stages(Box::new(Stages::new(n, u)))));
                }
            }
        }
    }

    pub(super) fn observe(&mut self, colour: Colour) -> Result<(), EngineError> {
        let (red, blue) = self
            .pending
            .take()
            .ok_or_else(|| EngineError::Script("colour observed without a selection".into()))?;
        self.block = match colour {
            Colour::Red => red,
            Colour::Blue => blue,
        };
        self.idx = 0;
        Ok(())
    }
}
