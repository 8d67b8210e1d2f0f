use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::transpiler::CouplingMap;

/// A circuit laid out on physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Width equals the coupling map size.
    pub circuit: Circuit,
    /// `final_layout[logical] = physical` after the last gate. The initial
    /// layout is the identity.
    pub final_layout: Vec<usize>,
    pub swaps: usize,
}

/// Greedy SWAP routing without lookahead.
///
/// Gates are placed in order. When a two-qubit gate acts on non-adjacent
/// physical qubits, the endpoint with the lower physical index walks along a
/// shortest path toward the other, one SWAP per step, until they touch.
pub fn route(c: &Circuit, map: &CouplingMap) -> Result<RoutedCircuit> {
    let n = map.num_qubits();
    if c.width() > n {
        return Err(Error::MapTooSmall {
            needed: c.width(),
            available: n,
        });
    }
    let mut l2p: Vec<usize> = (0..n).collect();
    let mut p2l: Vec<usize> = (0..n).collect();
    let mut out = Circuit::new(n);
    let mut swaps = 0;

    for gate in c.gates() {
        if gate.is_two_qubit() {
            let qs = gate.qubits();
            let (pa, pb) = (l2p[qs[0]], l2p[qs[1]]);
            if !map.is_adjacent(pa, pb) {
                let (mover, goal) = (pa.min(pb), pa.max(pb));
                let path = map.shortest_path(mover, goal);
                for step in path.windows(2).take(path.len() - 2) {
                    let (u, v) = (step[0], step[1]);
                    out.push(Gate::swap(u, v))?;
                    swaps += 1;
                    let (lu, lv) = (p2l[u], p2l[v]);
                    p2l.swap(u, v);
                    l2p[lu] = v;
                    l2p[lv] = u;
                }
            }
        }
        out.push(gate.remapped(|q| l2p[q]))?;
    }

    if let Some(d) = c.base_layers() {
        out = out.with_base_layers(d);
    }
    Ok(RoutedCircuit {
        circuit: out,
        final_layout: l2p,
        swaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn respects_map_without_swaps() {
        let c = Circuit::from_gates(4, [Gate::cx(0, 1), Gate::cx(2, 1), Gate::cx(2, 3)]).unwrap();
        let r = route(&c, &CouplingMap::line(4)).unwrap();
        assert_eq!(r.swaps, 0);
        assert_eq!(r.circuit.gates(), c.gates());
        assert_eq!(r.final_layout, vec![0, 1, 2, 3]);
    }

    #[test]
    fn distance_two_needs_one_swap() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 2)]).unwrap();
        let r = route(&c, &CouplingMap::line(3)).unwrap();
        assert_eq!(r.swaps, 1);
        assert_eq!(r.circuit.gates(), &[Gate::swap(0, 1), Gate::cx(1, 2)]);
        assert_eq!(r.final_layout, vec![1, 0, 2]);
    }

    #[test]
    fn all_to_all_never_swaps() {
        let c = Circuit::from_gates(5, [Gate::cx(0, 4), Gate::rzz(1, 3, 0.2), Gate::cx(4, 2)]).unwrap();
        let r = route(&c, &CouplingMap::all_to_all(5)).unwrap();
        assert_eq!(r.swaps, 0);
        assert_eq!(r.circuit.count_kind(GateKind::Swap), 0);
    }

    #[test]
    fn map_too_small() {
        assert_eq!(
            route(&Circuit::new(5), &CouplingMap::line(4)),
            Err(Error::MapTooSmall {
                needed: 5,
                available: 4
            })
        );
    }
}
