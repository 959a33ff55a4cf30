import numpy as np
import pytest

from onebit_tracking.signals import (CodeFileError, CodeSequence,
                                     generate_gps_ca_code,
                                     load_code_from_file, make_delay_waveform,
                                     make_pilot_waveform)


def octal_id(code):
    """First 10 chips as the conventional octal identifier (+1 -> bit 1)."""
    bits = (code.symbols[:10] > 0).astype(int)
    return int(f"{int(''.join(map(str, bits)), 2):o}")


class TestGpsCode:
    def test_length_and_symbols(self):
        code = generate_gps_ca_code(1)
        assert code.length == 1023
        assert set(np.unique(code.symbols)) == {-1.0, 1.0}

    @pytest.mark.parametrize("prn,expected", [
        (1, 1440), (2, 1620), (3, 1710), (4, 1744),
        (6, 1455), (7, 1131), (8, 1454),
    ])
    def test_known_octal_identifiers(self, prn, expected):
        assert octal_id(generate_gps_ca_code(prn)) == expected

    def test_prn5_octal_identifier(self):
        # generator verified against the published identifiers above;
        # PRN 5 (delay 17) yields 1133 = 1001011011b
        assert octal_id(generate_gps_ca_code(5)) == 1133

    def test_code_balance(self):
        # Gold codes of length 1023 carry one extra +1 chip
        for prn in (1, 5, 17, 32):
            assert generate_gps_ca_code(prn).symbols.sum() == 1.0

    def test_distinct_across_prn(self):
        a = generate_gps_ca_code(3).symbols
        b = generate_gps_ca_code(4).symbols
        assert not np.array_equal(a, b)

    def test_period(self):
        code = generate_gps_ca_code(1)
        assert code.period == pytest.approx(1023 / 1.023e6)

    @pytest.mark.parametrize("prn", [0, 33, -1, 1.5, "5", True])
    def test_invalid_prn(self, prn):
        with pytest.raises(ValueError):
            generate_gps_ca_code(prn)


class TestCodeSequence:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            CodeSequence(np.array([1.0, 0.5, -1.0]), 1e-6)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            CodeSequence(np.array([]), 1e-6)


class TestCodeFile:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "code.txt"
        path.write_text("+1\n-1\n1\n0\n\n-1\n")
        code = load_code_from_file(path, 1e-6)
        assert np.array_equal(code.symbols, [1, -1, 1, -1, -1])

    def test_bad_symbol_reports_line(self, tmp_path):
        path = tmp_path / "code.txt"
        path.write_text("1\n-1\ntwo\n")
        with pytest.raises(CodeFileError, match="line 3"):
            load_code_from_file(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "code.txt"
        path.write_text("\n\n")
        with pytest.raises(CodeFileError, match="no symbols"):
            load_code_from_file(path)


@pytest.fixture(scope="module")
def delay_waveform():
    return make_delay_waveform(generate_gps_ca_code(5))


class TestDelayWaveform:
    def test_block_geometry(self, delay_waveform):
        assert delay_waveform.samples_per_block == 2046
        assert delay_waveform.sample_rate == pytest.approx(2 * 1.023e6)

    @pytest.mark.parametrize("frac", [0.0, 0.137, 0.5, 0.93])
    def test_unit_power_all_delays(self, delay_waveform, frac):
        theta = frac * delay_waveform.code.chip_duration
        s = delay_waveform.eval(theta).s
        assert np.mean(s**2) == pytest.approx(1.0, abs=1e-12)

    def test_gradient_matches_finite_difference(self, delay_waveform):
        tc = delay_waveform.code.chip_duration
        h = 1e-6 * tc
        for frac in (0.21, 0.68, 3.4):
            theta = frac * tc
            ds = delay_waveform.eval(theta).ds_dtheta
            num = (delay_waveform.eval(theta + h).s
                   - delay_waveform.eval(theta - h).s) / (2 * h)
            scale = np.max(np.abs(ds))
            assert np.max(np.abs(ds - num)) / scale < 1e-4

    def test_periodic_in_code_period(self, delay_waveform):
        theta = 0.3 * delay_waveform.code.chip_duration
        a = delay_waveform.eval(theta)
        b = delay_waveform.eval(theta + delay_waveform.period)
        np.testing.assert_allclose(a.s, b.s, atol=1e-9)

    def test_chip_shift_is_cyclic_sample_shift(self, delay_waveform):
        tc = delay_waveform.code.chip_duration
        a = delay_waveform.eval(0.25 * tc).s
        b = delay_waveform.eval(1.25 * tc).s
        np.testing.assert_allclose(b, np.roll(a, 2), atol=1e-9)

    def test_baseband_table_subsamples_to_block(self, delay_waveform):
        table = delay_waveform.baseband_table(8)
        np.testing.assert_allclose(table[::8], delay_waveform.eval(0.0).s,
                                   atol=1e-9)

    def test_constant_code_has_flat_derivative(self):
        wf = make_delay_waveform(CodeSequence(np.ones(16), 1e-6))
        ev = wf.eval(0.4e-6)
        np.testing.assert_allclose(ev.s, 1.0, atol=1e-9)
        np.testing.assert_allclose(ev.ds_dtheta, 0.0, atol=1e-3)

    def test_nonfinite_delay_rejected(self, delay_waveform):
        with pytest.raises(ValueError):
            delay_waveform.eval(np.nan)


class TestPilotWaveform:
    def make(self):
        code = CodeSequence(np.array([1, -1, 1, -1, 1, -1, 1, -1, 1, 1],
                                     dtype=float), 1e-6)
        return make_pilot_waveform(code)

    def test_unit_power(self):
        pilot = self.make().pilot
        assert np.mean(pilot**2) == pytest.approx(1.0, abs=1e-12)

    def test_structure(self):
        wf = self.make()
        even = wf.pilot[0::2]
        odd = wf.pilot[1::2]
        # even samples carry the symbols, odd samples their midpoints
        np.testing.assert_allclose(odd, 0.5 * (even + np.roll(even, -1)),
                                   atol=1e-12)

    def test_eval_is_linear_in_gain(self):
        wf = self.make()
        ev = wf.eval(0.7)
        np.testing.assert_allclose(ev.s, 0.7 * wf.pilot)
        np.testing.assert_allclose(ev.ds_dtheta, wf.pilot)

    def test_rejects_unnormalized_pilot(self):
        from onebit_tracking.signals import LinearGainWaveform
        with pytest.raises(ValueError):
            LinearGainWaveform(np.array([2.0, 2.0]))
