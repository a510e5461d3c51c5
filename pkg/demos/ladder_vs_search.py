"""Compare the CNOT-ladder baseline with the stabilizer search on random commuting sets."""
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from _support import random_commuting_set  # noqa: E402

from pcoast import find_stabilizers, ladder_circuit  # noqa: E402
from pcoast.pauli import parse_pauli  # noqa: E402


def main(samples: int = 200, seed: int = 0) -> None:
    pair = [parse_pauli("ZZZ"), parse_pauli("ZXX")]
    print("ladder circuit for {ZZZ, ZXX}:")
    print(ladder_circuit(pair).to_text())
    print("\nsearch circuit (exact mode):")
    print(find_stabilizers(pair, "exact").circuit.to_text())

    rng = random.Random(seed)
    ladder_2q = search_2q = wins = 0
    for _ in range(samples):
        n = rng.randint(2, 8)
        S = random_commuting_set(rng, n, rng.randint(1, 2 * n))
        a = ladder_circuit(S).tqe_count()
        b = find_stabilizers(S).circuit.tqe_count()
        ladder_2q += a
        search_2q += b
        wins += b < a
    print(f"\n{samples} random sets: ladder {ladder_2q} two-qubit gates, search {search_2q}; "
          f"search strictly cheaper on {wins}")


if __name__ == "__main__":
    main()
