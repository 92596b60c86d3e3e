import json
import math

import numpy as np
import pytest

from attnmle.errors import ValidationError
from attnmle.instances import (
    InstanceFile,
    load_instance,
    random_gaussian_model,
    random_instance_file,
    save_instance,
)
from attnmle.prng import SplitMix64


class TestSplitMix64:
    def test_reference_stream_for_seed_zero(self):
        # published outputs of the public-domain splitmix64 reference
        s = SplitMix64(0)
        assert [s.next_u64() for _ in range(5)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
            0xF88BB8A8724C81EC,
            0x1B39896A51A8749B,
        ]

    def test_uniform_range_and_determinism(self):
        a = SplitMix64(42)
        b = SplitMix64(42)
        va = [a.uniform() for _ in range(500)]
        vb = [b.uniform() for _ in range(500)]
        assert va == vb
        assert all(-1.0 <= v < 1.0 for v in va)

    def test_randint_bounds_inclusive(self):
        s = SplitMix64(9)
        draws = {s.randint(1, 4) for _ in range(400)}
        assert draws == {1, 2, 3, 4}
        assert SplitMix64(0).randint(7, 7) == 7
        with pytest.raises(ValueError):
            s.randint(3, 2)

    def test_seed_wraps_to_64_bits(self):
        assert SplitMix64(2**64).next_u64() == SplitMix64(0).next_u64()


class TestInstanceFileValidation:
    def good(self):
        return {
            "alpha": 0.5,
            "beta": 1.0,
            "queries": [[1.0, 0.0]],
            "keys": [[1.0, 0.0], [0.0, 1.0]],
            "values": [[1.0, 2.0], [3.0, 4.0]],
        }

    def test_accepts_valid(self):
        inst = InstanceFile.from_dict(self.good())
        assert inst.length == 2 and inst.dim == 2 and inst.lambdas is None

    def test_missing_field_is_named(self):
        for name in ("alpha", "beta", "queries", "keys", "values"):
            data = self.good()
            del data[name]
            with pytest.raises(ValidationError, match=name):
                InstanceFile.from_dict(data)

    def test_unknown_field_is_named(self):
        data = self.good()
        data["gamma"] = 1.0
        with pytest.raises(ValidationError, match="gamma"):
            InstanceFile.from_dict(data)

    def test_bad_scalars_are_named(self):
        for name, bad in (("alpha", -1.0), ("alpha", "x"), ("beta", 0.0), ("beta", True)):
            data = self.good()
            data[name] = bad
            with pytest.raises(ValidationError, match=name):
                InstanceFile.from_dict(data)

    def test_length_mismatch_is_named(self):
        data = self.good()
        data["values"] = [[1.0, 2.0]]
        with pytest.raises(ValidationError, match="values"):
            InstanceFile.from_dict(data)

    def test_dim_mismatch_is_named(self):
        data = self.good()
        data["queries"] = [[1.0, 0.0, 0.0]]
        with pytest.raises(ValidationError, match="queries"):
            InstanceFile.from_dict(data)

    def test_lambdas_length_checked(self):
        data = self.good()
        data["lambdas"] = [1.0]
        with pytest.raises(ValidationError, match="lambdas"):
            InstanceFile.from_dict(data)
        data["lambdas"] = [1.0, 2.0]
        assert InstanceFile.from_dict(data).lambdas.shape == (2,)

    def test_non_finite_entries_rejected(self):
        data = self.good()
        data["keys"] = [[1.0, float("nan")], [0.0, 1.0]]
        with pytest.raises(ValidationError, match="keys"):
            InstanceFile.from_dict(data)


class TestInstanceFileRoundTrip:
    def test_save_load_preserves_doubles(self, tmp_path):
        inst = random_instance_file(7, 8, 4)
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        back = load_instance(path)
        assert np.array_equal(back.queries, inst.queries)
        assert np.array_equal(back.keys, inst.keys)
        assert np.array_equal(back.values, inst.values)
        assert back.alpha == inst.alpha and back.beta == inst.beta

    def test_same_seed_same_bytes(self, tmp_path):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        save_instance(random_instance_file(11, 5, 3), p1)
        save_instance(random_instance_file(11, 5, 3), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_invalid_json_is_validation_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="JSON"):
            load_instance(path)

    def test_model_helpers(self):
        inst = random_instance_file(3, 4, 2)
        assert inst.alpha == 1.0 / math.sqrt(2) and inst.beta == 1.0
        model = inst.gaussian_model()
        assert model.length == 4 and model.dim == 2
        maxent = inst.maxent_model()
        assert np.all(maxent.lambdas == inst.alpha)

    def test_json_field_order_is_canonical(self, tmp_path):
        path = tmp_path / "c.json"
        save_instance(random_instance_file(1, 2, 2), path)
        data = json.loads(path.read_text())
        assert list(data) == ["alpha", "beta", "queries", "keys", "values"]


class TestRandomGeneration:
    def test_generated_instance_respects_requested_shape(self):
        inst = random_instance_file(99, 6, 5)
        assert inst.queries.shape == (6, 5)
        assert inst.keys.shape == (6, 5)
        assert inst.values.shape == (6, 5)

    def test_rejects_bad_shape_arguments(self):
        with pytest.raises(ValidationError):
            random_instance_file(1, 0, 3)
        with pytest.raises(ValidationError):
            random_instance_file(1, 3, 0)

    def test_draw_order_is_documented_row_major(self):
        # queries first, then keys, then values, each row-major
        stream = SplitMix64(5)
        flat = [stream.uniform() for _ in range(3 * 2 * 2)]
        inst = random_instance_file(5, 2, 2)
        expected = np.array(flat).reshape(3, 2, 2)
        assert np.array_equal(inst.queries, expected[0])
        assert np.array_equal(inst.keys, expected[1])
        assert np.array_equal(inst.values, expected[2])

    def test_random_model_bounds(self):
        stream = SplitMix64(1)
        for _ in range(50):
            model = random_gaussian_model(stream)
            assert 1 <= model.length <= 16
            assert 1 <= model.dim <= 8
            assert model.alpha == 1.0 / math.sqrt(model.dim)
            assert model.beta == 1.0
