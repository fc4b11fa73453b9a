use super::{Dfa, StateId};

/// Strongly connected components of the full transition graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sccs {
    /// Component index of each state.
    pub component_of: Vec<usize>,
    /// States of each component, ascending.
    pub components: Vec<Vec<StateId>>,
    /// A state is nontrivial iff it lies on a cycle.
    pub nontrivial: Vec<bool>,
    /// A component is maximal iff no transition leaves it.
    pub maximal: Vec<bool>,
}

impl Sccs {
    pub fn same_component(&self, p: StateId, q: StateId) -> bool {
        self.component_of[p] == self.component_of[q]
    }
}

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order (sinks first).
pub fn sccs(dfa: &Dfa) -> Sccs {
    let n = dfa.state_count();
    let k = dfa.num_symbols();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<StateId> = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<StateId>> = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (state, next symbol to explore)
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < k {
                let w = dfa.row(v)[top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }

    let nontrivial = (0..n)
        .map(|q| components[component_of[q]].len() > 1 || dfa.row(q).contains(&q))
        .collect();
    let maximal = components
        .iter()
        .map(|comp| {
            comp.iter()
                .all(|&q| dfa.row(q).iter().all(|&t| component_of[t] == component_of[q]))
        })
        .collect();
    Sccs {
        component_of,
        components,
        nontrivial,
        maximal,
    }
}
