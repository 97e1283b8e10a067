import numpy as np
import pytest

from netdmd.errors import BadConfig
from netdmd.bench import (
    CSV_COLUMNS,
    SweepConfig,
    SweepResult,
    export_result,
    load_result_csv,
    load_result_json,
    mean_errors,
    run_sweep,
    run_trial,
    sweep_config_from_dict,
    sweep_config_to_dict,
    trajectory_digest,
)
from netdmd.numkernel import FixedRank, MachineDefault, RelativeThreshold
from netdmd.sysmodel import (
    Circular,
    ErdosRenyi,
    GeneratorConfig,
    LinearNetworkSystem,
    derive_rng,
    gen_circular,
    simulate,
)
from netdmd.topology import NetworkTopology


class TestRunTrial:
    def test_worked_example_contrast(self, two_node_system):
        rows = run_trial(
            two_node_system,
            3,
            ("dmdc", "network_dmdc"),
            derive_rng(0),
            input_range=(-1.0, 1.0),
        )
        by_alg = {r.algorithm: r for r in rows}
        assert by_alg["network_dmdc"].frobenius_error < 1e-9
        assert by_alg["dmdc"].frobenius_error > 1e-3

    def test_full_row_rank_recovers_for_both(self, two_node_system):
        rows = run_trial(two_node_system, 20, ("dmdc", "network_dmdc"), derive_rng(1))
        assert all(r.frobenius_error < 1e-6 for r in rows)

    def test_autonomous_scalars_recovered_at_m_one(self):
        t = NetworkTopology(("v1", "v2"), (), (), {"v1": 1, "v2": 1})
        system = LinearNetworkSystem(t, {"v1": [[0.3]], "v2": [[-0.8]]}, {})
        rows = run_trial(system, 1, ("network_dmdc",), derive_rng(2))
        assert rows[0].frobenius_error < 1e-12

    def test_trial_tag_and_warnings_fields(self, two_node_system):
        rows = run_trial(two_node_system, 3, ("dmd",), derive_rng(3), trial=7)
        assert rows[0].trial == 7
        assert "dmd_ignores_inputs" in rows[0].warnings

    def test_bad_m(self, two_node_system):
        with pytest.raises(BadConfig):
            run_trial(two_node_system, 0, ("dmdc",), derive_rng(0))

    def test_digest_stable(self, two_node_system):
        traj = simulate(two_node_system, (1.0, 2.0), np.ones((2, 3)))
        assert trajectory_digest(traj) == trajectory_digest(traj)

    def test_reduced_variants_run(self, two_node_system):
        rows = run_trial(
            two_node_system,
            10,
            ("dmd", "dmdc", "network_dmdc"),
            derive_rng(5),
            use_reduced=True,
        )
        assert len(rows) == 3
        by_alg = {r.algorithm: r for r in rows}
        # full-rank data: reduced dmdc and network dmdc still recover
        assert by_alg["dmdc"].frobenius_error < 1e-6
        assert by_alg["network_dmdc"].frobenius_error < 1e-6


class TestSweepConfig:
    def test_validation(self):
        gen = GeneratorConfig(Circular(4, 2))
        with pytest.raises(BadConfig):
            SweepConfig(generator=gen, trials=0, m_values=(1,))
        with pytest.raises(BadConfig):
            SweepConfig(generator=gen, trials=1, m_values=())
        with pytest.raises(BadConfig):
            SweepConfig(generator=gen, trials=1, m_values=(1,), algorithms=("nope",))

    def test_dict_round_trip(self):
        cfg = SweepConfig(
            generator=GeneratorConfig(ErdosRenyi(10, 0.2), coeff_range=(-2, 2), seed=3),
            trials=4,
            m_values=(2, 5),
            algorithms=("dmd", "network_dmdc"),
            truncation=RelativeThreshold(1e-8),
            rcond=1e-10,
            master_seed=99,
            initial_state_range=(-0.5, 0.5),
        )
        assert sweep_config_from_dict(sweep_config_to_dict(cfg)) == cfg

    def test_dict_round_trip_fixed_rank(self):
        cfg = SweepConfig(
            generator=GeneratorConfig(Circular(6, 3)),
            trials=1,
            m_values=(3,),
            truncation=FixedRank(2),
            use_reduced=True,
        )
        assert sweep_config_from_dict(sweep_config_to_dict(cfg)) == cfg


@pytest.fixture(scope="module")
def small_result():
    cfg = SweepConfig(
        generator=GeneratorConfig(Circular(6, 2), input_range=(-1, 1), seed=0),
        trials=3,
        m_values=(3, 9),
        algorithms=("dmdc", "network_dmdc"),
        master_seed=11,
    )
    return run_sweep(cfg)


class TestRunSweep:
    def test_row_count(self, small_result):
        assert len(small_result.rows) == 3 * 2 * 2

    def test_means_recomputable(self, small_result):
        assert small_result.means == mean_errors(small_result.rows)

    def test_deterministic_modulo_wall_time(self, small_result):
        again = run_sweep(small_result.config)
        strip = lambda rows: [
            (r.trial, r.m, r.algorithm, r.frobenius_error, r.cond_ratio, r.warnings) for r in rows
        ]
        assert strip(again.rows) == strip(small_result.rows)

    def test_single_vertex_single_snapshot(self):
        cfg = SweepConfig(
            generator=GeneratorConfig(ErdosRenyi(1, 0.0)),
            trials=1,
            m_values=(1,),
            algorithms=("dmd", "network_dmdc"),
        )
        result = run_sweep(cfg)
        assert len(result.rows) == 2
        assert {r.algorithm for r in result.rows} == {"dmd", "network_dmdc"}
        # a lone scalar vertex is identified exactly from one snapshot
        assert all(r.frobenius_error < 1e-12 for r in result.rows)

    def test_plateau_beyond_max_local_dim(self):
        # every well-conditioned cell at m >= the largest local dimension recovers
        cfg = SweepConfig(
            generator=GeneratorConfig(Circular(12, 2), input_range=(-2, 2), seed=0),
            trials=5,
            m_values=(3, 6, 12, 24),
            algorithms=("network_dmdc",),
            master_seed=4,
        )
        result = run_sweep(cfg)
        for row in result.rows:
            if row.m >= 3 and "ill_conditioned" not in row.warnings:
                assert row.frobenius_error < 1e-6


class TestExport:
    def _result(self, rows=()):
        return SweepResult(rows=tuple(rows), means=mean_errors(rows), config=None)

    def test_empty_csv_is_header_only(self, tmp_path):
        path = tmp_path / "out.csv"
        export_result(self._result(), "csv", path)
        assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"

    def test_two_rows_make_three_lines(self, tmp_path):
        from netdmd.bench import SweepRow

        rows = [
            SweepRow(0, 3, "dmdc", 0.5, 0.1, 0.01, ""),
            SweepRow(0, 3, "network_dmdc", 1e-12, 0.5, 0.02, ""),
        ]
        path = tmp_path / "out.csv"
        export_result(self._result(rows), "csv", path)
        assert len(path.read_text().splitlines()) == 3

    def test_json_round_trip_preserves_means(self, tmp_path):
        cfg = SweepConfig(
            generator=GeneratorConfig(Circular(4, 2), seed=1),
            trials=2,
            m_values=(2, 4),
            master_seed=5,
        )
        result = run_sweep(cfg)
        path = tmp_path / "out.json"
        export_result(result, "json", path)
        back = load_result_json(path)
        assert back.means == result.means
        assert back.config == result.config
        assert back.rows == result.rows

    def test_csv_round_trip(self, tmp_path):
        cfg = SweepConfig(
            generator=GeneratorConfig(Circular(4, 2), seed=1),
            trials=1,
            m_values=(3,),
            master_seed=5,
        )
        result = run_sweep(cfg)
        path = tmp_path / "out.csv"
        export_result(result, "csv", path)
        back = load_result_csv(path)
        assert back.rows == result.rows
        assert back.means == result.means

    def test_csv_bytes_deterministic_excluding_wall_time(self, tmp_path):
        cfg = SweepConfig(
            generator=GeneratorConfig(Circular(5, 2), seed=2),
            trials=2,
            m_values=(2, 5),
            master_seed=8,
        )
        paths = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            export_result(run_sweep(cfg), "csv", path)
            paths.append(path)

        def strip_wall(path):
            lines = path.read_text().splitlines()
            idx = CSV_COLUMNS.index("wall_time_s")
            return [",".join(c for i, c in enumerate(line.split(",")) if i != idx) for line in lines]

        assert strip_wall(paths[0]) == strip_wall(paths[1])

    def test_unknown_format(self, tmp_path):
        with pytest.raises(BadConfig):
            export_result(self._result(), "yaml", tmp_path / "x")
