"""Group the bundled H2 Hamiltonian, search each group and print the statistics."""
from pcoast import find_stabilizers, read_terms, sorted_insertion
from pcoast.circuit import aggregate_stats, r2q
from pcoast.data import read_data
from pcoast.measurement_map import map_measurements


def main() -> None:
    terms = read_terms(read_data("h2_jw.terms"))
    grouping = sorted_insertion(terms)
    n = terms[0].pauli.n_qubits
    print(f"{len(terms)} terms, offset {grouping.offset:+.6f}, {len(grouping)} groups")
    rows = []
    for gi in range(len(grouping)):
        S = grouping.paulis(gi)
        res = find_stabilizers(S, "exact", n_qubits=n)
        remap = map_measurements(S, res.circuit, res.frame)
        s = res.circuit.stats()
        rows.append({"k": s.n_measurements, **s.as_dict()})
        print(f"\ngroup {gi}: {len(S)} operators -> k={s.n_measurements}, "
              f"2q={s.two_qubit_gates}, r_2q={r2q(n, s.n_measurements, s.two_qubit_gates)}")
        print(res.circuit.to_text())
        for p, row, v in zip(S, remap.b, remap.v):
            picked = [src for src, bit in zip(remap.sources, row) if bit]
            print(f"  {p.label():>6} = {'-' if v else '+'}{'*'.join(picked)}")
    agg = aggregate_stats(n, rows)
    print(f"\nmean k {agg['k']}, aggregate r_2q {agg['r_2q']}")


if __name__ == "__main__":
    main()
