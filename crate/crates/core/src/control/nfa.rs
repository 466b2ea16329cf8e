use super::ControlExpr;

#[derive(Debug, Clone, Default)]
struct State {
    epsilon: Vec<usize>,
    moves: Vec<(usize, usize)>,
}

/// Thompson NFA over production names. Symbols are interned into
/// `alphabet`; transitions refer to them by index.
#[derive(Debug, Clone)]
pub struct ControlNfa {
    states: Vec<State>,
    alphabet: Vec<String>,
    start: usize,
    accept: usize,
}

/// A set of NFA states, one flag per state.
pub type StateSet = Vec<bool>;

impl ControlNfa {
    pub fn compile(expr: &ControlExpr) -> Self {
        let mut nfa = ControlNfa {
            states: Vec::new(),
            alphabet: expr.symbols().into_iter().collect(),
            start: 0,
            accept: 0,
        };
        let (s, a) = nfa.build(expr);
        nfa.start = s;
        nfa.accept = a;
        nfa
    }

    fn fresh(&mut self) -> usize {
        self.states.push(State::default());
        self.states.len() - 1
    }

    fn build(&mut self, expr: &ControlExpr) -> (usize, usize) {
        match expr {
            ControlExpr::Symbol(name) => {
                let s = self.fresh();
                let a = self.fresh();
                let sym = self.alphabet.binary_search(name).expect("interned");
                self.states[s].moves.push((sym, a));
                (s, a)
            }
            ControlExpr::Group(inner) => self.build(inner),
            ControlExpr::Concat(items) => {
                let parts = items.iter().map(|i| self.build(i)).collect::<Vec<_>>();
                for w in parts.windows(2) {
                    self.states[w[0].1].epsilon.push(w[1].0);
                }
                let first = parts.first().map(|p| p.0);
                let last = parts.last().map(|p| p.1);
                match (first, last) {
                    (Some(f), Some(l)) => (f, l),
                    _ => {
                        let s = self.fresh();
                        (s, s)
                    }
                }
            }
            ControlExpr::Union(items) => {
                let s = self.fresh();
                let a = self.fresh();
                for item in items {
                    let (is, ia) = self.build(item);
                    self.states[s].epsilon.push(is);
                    self.states[ia].epsilon.push(a);
                }
                (s, a)
            }
            ControlExpr::Star(inner) => {
                let s = self.fresh();
                let a = self.fresh();
                let (is, ia) = self.build(inner);
                self.states[s].epsilon.extend([is, a]);
                self.states[ia].epsilon.extend([is, a]);
                (s, a)
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    fn close(&self, set: &mut StateSet) {
        let mut stack: Vec<usize> = (0..set.len()).filter(|&i| set[i]).collect();
        while let Some(s) = stack.pop() {
            for &t in &self.states[s].epsilon {
                if !set[t] {
                    set[t] = true;
                    stack.push(t);
                }
            }
        }
    }

    /// Epsilon closure of the start state.
    pub fn start_set(&self) -> StateSet {
        let mut set = vec![false; self.states.len()];
        set[self.start] = true;
        self.close(&mut set);
        set
    }

    /// Consumes one production name. Unknown names lead to the empty set.
    pub fn step(&self, set: &StateSet, symbol: &str) -> StateSet {
        let mut next = vec![false; self.states.len()];
        if let Ok(sym) = self.alphabet.binary_search_by(|a| a.as_str().cmp(symbol)) {
            for (i, _) in set.iter().enumerate().filter(|(_, on)| **on) {
                for &(m, t) in &self.states[i].moves {
                    if m == sym {
                        next[t] = true;
                    }
                }
            }
            self.close(&mut next);
        }
        next
    }

    pub fn is_accepting(&self, set: &StateSet) -> bool {
        set[self.accept]
    }

    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut set = self.start_set();
        for w in word {
            set = self.step(&set, w.as_ref());
            if !set.iter().any(|&b| b) {
                return false;
            }
        }
        self.is_accepting(&set)
    }
}
