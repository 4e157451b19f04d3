"""End-to-end acceptance suite.

Each test prints one PASS line when its criterion holds at the stated
tolerance; a failed assertion is the FAIL line.  Runs in well under a
minute on a laptop: `pytest tests/test_acceptance.py -s`.
"""

import json

import numpy as np

import coarsekit as ck
from coarsekit import classical as cl
from coarsekit import compat
from coarsekit.channel import (
    KrausChannel,
    choi_to_kraus,
    choi_to_transfer_mat,
    connecting_unitary,
    dual,
    transfer_to_choi_mat,
    unitary_channel,
)
from coarsekit.cli import main
from coarsekit.io import dumps, matrix_to_json
from coarsekit.linalg import frob
from coarsekit.rand import haar_unitary, random_density_mat, random_kraus_ops
from coarsekit.scenarios import (
    emergent_spin_rotation,
    registry,
    random_planted_scenario,
    random_scenario,
    spin_dichotomization,
)

REG = registry()


def test_criterion_1_spin_dichotomization_commutes():
    rng = np.random.default_rng(20260810)
    cfg = compat.CheckConfig(witness_trials=150, seed=1)
    worst_choi = 0.0
    for k in range(50):
        alpha = rng.uniform(0.0, 2 * np.pi)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        s = spin_dichotomization(3, alpha, n).scenario
        report = compat.run_all(s, cfg)
        assert report.verdict == "compatible", (k, alpha, n)
        assert report.fiber_preserved
        assert report.sdp.status == compat.FEASIBLE
        assert report.witness is None
        assert all(report.method_agreement.values())
        expected = unitary_channel(emergent_spin_rotation(alpha, n))
        dist = frob(report.emergent.choi.mat - expected.choi.mat)
        worst_choi = max(worst_choi, dist)
        assert dist < 1e-7, (k, alpha, n, dist)
    print(f"\n[criterion 1] PASS: 50 random spin rotations, "
          f"worst Choi distance to the half-angle rotation {worst_choi:.2e}")


def test_criterion_2_example1_dichotomy():
    good = REG["example1-compatible"].scenario
    ok, res = compat.check_fiber_preservation(good)
    assert ok and res < 1e-8
    assert compat.sdp_feasibility(good).status == compat.FEASIBLE

    bad = REG["example1-incompatible"].scenario
    ok_bad, res_bad = compat.check_fiber_preservation(bad)
    assert not ok_bad and res_bad > 1e-3
    sdp_bad = compat.sdp_feasibility(bad)
    assert sdp_bad.status in (compat.INFEASIBLE, compat.UNDECIDED)
    witness = compat.search_witness(bad, trials=1000, ancilla_dim=1, seed=0)
    assert witness is not None
    assert witness.gap > 1e-4
    print(f"[criterion 2] PASS: fiber {res:.1e} vs {res_bad:.1e}, "
          f"sdp {sdp_bad.status}, witness gap {witness.gap:.2e} at trial {witness.trial}")


def test_criterion_3_example2_block_criterion():
    for name, want in (
        ("example2-compatible", "compatible"),
        ("example2-incompatible", "incompatible"),
    ):
        s = REG[name].scenario
        report = compat.run_all(s, compat.CheckConfig(witness_trials=200))
        assert report.verdict == want, name
        fiber_ok, _ = compat.check_fiber_preservation(s)
        assert fiber_ok == (want == "compatible")
    print("[criterion 3] PASS: block verdicts match the kernel-invariance oracle")


def _criterion4_scenarios():
    pairs = [(3, 2), (3, 3), (4, 2), (4, 3), (6, 2), (6, 3)]
    planted = [(3, 1), (2, 2), (2, 3), (3, 2)]  # (small, env): D in {3, 4, 6, 6}
    for i in range(200):
        if i % 4 == 0:
            small, env = planted[(i // 4) % len(planted)]
            yield random_planted_scenario(small, env, 10_000 + i).scenario
        else:
            big, small = pairs[i % len(pairs)]
            yield random_scenario(big, small, 3, 20_000 + i).scenario


def test_criterion_4_intertwiner_implies_fiber_and_dual_identity():
    n_success = 0
    for s in _criterion4_scenarios():
        v, residual = compat.solve_algebraic_V(s)
        if v is None:
            continue
        n_success += 1
        assert residual <= 1e-8 * np.sqrt(s.D)
        fiber_ok, _ = compat.check_fiber_preservation(s)
        assert fiber_ok
        assert compat.verify_dual_identity(s, v) <= 1e-7
    assert n_success >= 50  # the planted scenarios guarantee a non-vacuous sweep
    print(f"[criterion 4] PASS: {n_success}/200 scenarios admit an intertwiner; "
          f"all of them preserve fibers and satisfy the dual identity")


def test_criterion_5_kraus_equivalence_roundtrip():
    # wherever construction succeeds, the two composed Kraus sets are
    # unitarily connected within tolerance
    suite = [REG[k].scenario for k in
             ("example1-compatible", "example2-compatible", "spin-d3")]
    suite += [random_planted_scenario(2, 2, 500 + k).scenario for k in range(10)]
    suite += [random_scenario(4, 2, 3, 600 + k).scenario for k in range(10)]
    n_built = 0
    for s in suite:
        gamma = compat.construct_emergent(s)
        if gamma is None:
            continue
        n_built += 1
        ok, v = compat.verify_kraus_equivalence(s, gamma)
        assert ok
        upper = [k @ m for k in gamma.kraus for m in s.cg.kraus]
        lower = [m @ s.u for m in s.cg.kraus]
        n = max(len(upper), len(lower))
        upper += [np.zeros_like(upper[0])] * (n - len(upper))
        lower += [np.zeros_like(lower[0])] * (n - len(lower))
        residual = max(
            frob(upper[i] - sum(v[i, j] * lower[j] for j in range(n)))
            for i in range(n)
        )
        assert residual <= 1e-7
    assert n_built >= 13

    # plant-and-recover for the connecting unitary on 100 random channels
    for k in range(100):
        rng = np.random.default_rng(700 + k)
        din, dout, nk = [(2, 2, 2), (3, 2, 3), (4, 3, 2)][k % 3]
        ch = KrausChannel(random_kraus_ops(din, dout, nk, rng))
        w0 = haar_unitary(nk, rng)
        mixed = KrausChannel(
            [sum(w0[i, j] * ch.kraus[j] for j in range(nk)) for i in range(nk)]
        )
        w = connecting_unitary(mixed, ch)
        for i in range(nk):
            rebuilt = sum(w[i, j] * ch.kraus[j] for j in range(nk))
            assert frob(mixed.kraus[i] - rebuilt) <= 1e-7
    print(f"[criterion 5] PASS: {n_built} constructed maps verified; "
          f"100 plant-and-recover rounds within 1e-7")


def test_criterion_6_channel_representation_integrity():
    worst_rt = worst_unital = worst_pair = 0.0
    for k in range(100):
        rng = np.random.default_rng(800 + k)
        din, dout, nk = [(2, 2, 3), (3, 2, 2), (4, 3, 3), (3, 3, 2)][k % 4]
        ch = KrausChannel(random_kraus_ops(din, dout, nk, rng))

        back = choi_to_kraus(ch.choi)
        worst_rt = max(worst_rt, frob(back.choi.mat - ch.choi.mat))
        reshuffled = transfer_to_choi_mat(ch.transfer_mat, din, dout)
        worst_rt = max(worst_rt, frob(reshuffled - ch.choi.mat))
        worst_rt = max(
            worst_rt,
            frob(choi_to_transfer_mat(reshuffled, din, dout) - ch.transfer_mat),
        )

        d = dual(ch)
        unital = sum(op @ np.eye(dout) @ op.conj().T for op in d.kraus)
        worst_unital = max(worst_unital, frob(unital - np.eye(din)))

        a = rng.normal(size=(dout, dout)) + 1j * rng.normal(size=(dout, dout))
        rho = random_density_mat(din, rng)
        lhs = np.trace(a @ sum(op @ rho @ op.conj().T for op in ch.kraus))
        rhs = np.trace(sum(op @ a @ op.conj().T for op in d.kraus) @ rho)
        worst_pair = max(worst_pair, abs(lhs - rhs))

    assert worst_rt < 1e-8
    assert worst_unital < 1e-9
    assert worst_pair < 1e-9
    print(f"[criterion 6] PASS: round trips {worst_rt:.1e}, "
          f"dual unitality {worst_unital:.1e}, adjoint pairing {worst_pair:.1e}")


def test_criterion_7_classical_exactness():
    worst_total = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n_a, n_b, n_x, n_y = rng.integers(2, 5, size=4)

        def table(rows, cols):
            t = rng.uniform(0.05, 1.0, size=(rows, cols))
            return cl.CondTable(t / t.sum(axis=0))

        pa = rng.uniform(0.05, 1.0, size=n_a)
        m = cl.ChainModel(
            pA=pa / pa.sum(),
            pB_given_A=table(n_b, n_a),
            pX_given_A=table(n_x, n_a),
            pY_given_B=table(n_y, n_b),
        )
        worst_total = max(worst_total, cl.verify_total_probability(m))
    assert worst_total <= 1e-12

    b_table = [[0.9, 0.4, 0.2, 0.6], [0.1, 0.6, 0.8, 0.4]]
    base = dict(pA=[0.5, 0.5], pB_given_AX=cl.CondTable(b_table),
                pY_given_B=cl.CondTable(np.eye(2)))
    m1 = cl.DoModel(pX_given_A=cl.CondTable([[0.95, 0.05], [0.05, 0.95]]), **base)
    m2 = cl.DoModel(pX_given_A=cl.CondTable([[0.2, 0.7], [0.8, 0.3]]), **base)
    worst_inv = max(
        np.abs(cl.do_intervention(m1, x) - cl.do_intervention(m2, x)).max()
        for x in (0, 1)
    )
    assert worst_inv <= 1e-12

    confounded = cl.DoModel(
        pA=[0.5, 0.5],
        pX_given_A=cl.CondTable([[0.95, 0.05], [0.05, 0.95]]),
        pB_given_AX=cl.CondTable([[0.95, 0.95, 0.05, 0.05],
                                  [0.05, 0.05, 0.95, 0.95]]),
        pY_given_B=cl.CondTable(np.eye(2)),
    )
    obs, do_vec = cl.observational_vs_do(confounded, 0)
    gap = np.abs(obs - do_vec).sum()
    assert gap > 0.1
    print(f"[criterion 7] PASS: total probability {worst_total:.1e}, "
          f"do-invariance {worst_inv:.1e}, confounding gap {gap:.2f}")


def test_criterion_8_helstrom_data_processing():
    worst = -np.inf
    for k in range(100):
        rng = np.random.default_rng(900 + k)
        dim_in, dim_out = [(2, 2), (3, 2), (4, 3)][k % 3]
        rho0 = random_density_mat(dim_in, rng)
        rho1 = random_density_mat(dim_in, rng)
        p0 = rng.uniform(0.05, 0.95)
        before = compat.helstrom_pguess(p0, rho0, rho1)
        ch = KrausChannel(random_kraus_ops(dim_in, dim_out, 2, rng))
        after = compat.helstrom_pguess(
            p0,
            sum(op @ rho0 @ op.conj().T for op in ch.kraus),
            sum(op @ rho1 @ op.conj().T for op in ch.kraus),
        )
        worst = max(worst, after - before)
    assert worst <= 1e-10
    print(f"[criterion 8] PASS: worst monotonicity violation {worst:.1e} over 100 maps")


def test_criterion_9_cli_end_to_end(tmp_path):
    # exit 0: compatible registry scenario
    assert main(["check", "spin-d3", "--trials", "50"]) == 0
    # exit 1: incompatible registry scenario
    assert main(["check", "example1-incompatible", "--trials", "100"]) == 1
    # exit 2: nearly compatible scenario, witness budget zero
    probs = [0.8875, 0.0625, 0.0125, 0.0375]
    paulis = [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]]),
        np.diag([1.0, -1.0]).astype(complex),
    ]
    theta = 4e-6
    doc = {
        "version": 1, "D": 2, "d": 2,
        "kraus": [matrix_to_json(np.sqrt(p) * s) for p, s in zip(probs, paulis)],
        "unitary": matrix_to_json(
            np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])
        ),
    }
    almost = tmp_path / "almost.json"
    almost.write_text(dumps(doc), encoding="utf-8")
    assert main(["check", str(almost), "--trials", "0"]) == 2
    # exit 64: unreadable input
    assert main(["check", str(tmp_path / "missing.json")]) == 64
    # exit 65: parses but violates invariants
    bad = dict(doc)
    bad["kraus"] = [matrix_to_json(np.eye(2) * 0.5)]
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(dumps(bad), encoding="utf-8")
    assert main(["check", str(bad_path)]) == 65

    # byte-for-byte reproducible machine reports under a fixed seed
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["check", "example1-incompatible", "--seed", "42", "--trials", "200"]
    assert main(args + ["--json", str(a)]) == 1
    assert main(args + ["--json", str(b)]) == 1
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text(encoding="utf-8"))
    assert report["verdict"] == "incompatible"
    print("[criterion 9] PASS: exit codes 0/1/2/64/65 exercised, "
          "reports byte-identical under a fixed seed")
