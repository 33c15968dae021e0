import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from chang_radon.errors import WeightDegenerate
from chang_radon.geometry import Grid2D, ScalarField, build_geometry
from chang_radon.inversion import (
    backproject,
    chang_reconstruct,
    chang_reconstruct_sym,
    classical_fbp,
    hilbert_row,
    hilbert_row_direct,
    s_derivative_row,
)
from chang_radon.metrics import compare, imag_leak
from chang_radon.transforms import Sinogram, Uniform, forward_project

from test_transforms import even_odd_parts


def smooth_row(n, center=0.0, half=1.0, power=4):
    s = np.linspace(-1.2, 1.2, n)
    u = (s - center) / half
    return np.where(np.abs(u) < 1, (1 - u * u) ** power, 0.0)


def test_hilbert_zero():
    assert np.all(hilbert_row(np.zeros(65)) == 0)
    assert np.all(hilbert_row_direct(np.zeros(65)) == 0)


def test_hilbert_analytic_pair():
    # H[1 / (1 + t^2)](s) = s / (1 + s^2) by residues
    s = np.linspace(-40, 40, 4001)
    h = hilbert_row(1 / (1 + s**2))
    interior = np.abs(s) <= 10
    assert np.abs(h - s / (1 + s**2))[interior].max() < 1e-3


def test_hilbert_windowed_cosine():
    # multiplier -i sign(omega) maps cos to sin; the Gaussian window is wide
    s = np.linspace(-30, 30, 2001)
    env = np.exp(-(s**2) / 50)
    h = hilbert_row(np.cos(3 * s) * env)
    interior = np.abs(s) <= 10
    assert np.abs(h - np.sin(3 * s) * env)[interior].max() < 1e-6


@pytest.mark.parametrize("n", [257, 513])
@pytest.mark.parametrize("center, half, power", [(0.0, 1.0, 4), (0.2, 0.5, 3), (-0.4, 0.6, 6)])
def test_hilbert_fft_matches_direct(n, center, half, power):
    g = smooth_row(n, center, half, power)
    a = hilbert_row(g)
    b = hilbert_row_direct(g)
    assert np.linalg.norm(a - b) / np.linalg.norm(b) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(arrays(np.float64, st.integers(3, 80), elements=st.floats(-1, 1)))
def test_hilbert_fft_matches_direct_on_any_row(g):
    assert np.abs(hilbert_row(g) - hilbert_row_direct(g)).max() <= 1e-12 * (1 + np.abs(g).sum())


def test_hilbert_parity_flip():
    n = 257
    s = np.linspace(-1.2, 1.2, n)
    odd = s * smooth_row(n)
    even = smooth_row(n)
    ho = hilbert_row_direct(odd)
    he = hilbert_row_direct(even)
    assert np.abs(ho - ho[::-1]).max() <= 1e-10
    assert np.abs(he + he[::-1]).max() <= 1e-10


def test_hilbert_anti_involution():
    s = np.linspace(-30, 30, 2001)
    g = np.cos(3 * s) * np.exp(-(s**2) / 50)
    assert np.abs(hilbert_row(hilbert_row(g)) + g).max() < 1e-3


def test_hilbert_complex_rows_split():
    rng = np.random.default_rng(0)
    re, im = rng.normal(size=(2, 3, 33))
    h = hilbert_row(re + 1j * im)
    assert np.allclose(h, hilbert_row(re) + 1j * hilbert_row(im), atol=1e-13)


def test_s_derivative_examples():
    s = np.linspace(-1, 1, 41)
    ds = s[1] - s[0]
    assert np.all(s_derivative_row(np.full(41, 3.0), ds) == 0)
    assert np.allclose(s_derivative_row(2 * s + 1, ds), 2.0, atol=1e-12)
    # central and one-sided 2nd-order stencils are exact on quadratics
    assert np.allclose(s_derivative_row(s**2, ds), 2 * s, atol=1e-12)


def test_s_derivative_second_order():
    errs = []
    for n in (33, 65, 129, 257):
        s = np.linspace(-1, 1, n)
        ds = s[1] - s[0]
        h = np.sin(3 * s)
        ref = (-h[4:] + 8 * h[3:-1] - 8 * h[1:-3] + h[:-4]) / (12 * ds)
        errs.append(np.abs(s_derivative_row(h, ds)[2:-2] - ref).max())
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.9)


def test_backproject_examples(small):
    grid, geom = small
    zero = Sinogram(geom, np.zeros(geom.shape, complex))
    assert np.all(backproject(zero, grid).values == 0)
    c = np.random.default_rng(2).normal(size=geom.angles.n)
    flat = Sinogram(geom, np.repeat(c[:, None], geom.detector.n, axis=1))
    out = backproject(flat, grid).values
    inside = grid.disk_mask(geom.s_max)
    assert np.allclose(out[inside], geom.angles.step * c.sum(), atol=1e-12)


def test_backproject_odd_pairs_cancel(small):
    grid, geom = small
    rng = np.random.default_rng(4)
    raw = rng.normal(size=geom.shape)
    even, odd = even_odd_parts(raw, geom)
    full = backproject(Sinogram(geom, raw), grid).values
    sym = backproject(Sinogram(geom, even), grid).values
    assert np.abs(full - sym).max() <= 1e-12 * np.abs(full).max()
    assert np.abs(backproject(Sinogram(geom, odd), grid).values).max() <= 1e-12 * np.abs(full).max()


def random_sinogram(geom, rng):
    return Sinogram(geom, rng.normal(size=geom.shape) + 1j * rng.normal(size=geom.shape))


def test_chang_linearity(small):
    grid, geom = small
    rng = np.random.default_rng(5)
    p1, p2 = random_sinogram(geom, rng), random_sinogram(geom, rng)
    X, _ = grid.mesh()
    w0 = ScalarField(grid, 1.5 + 0.3 * X + 0.2j)
    lhs = chang_reconstruct(p1.with_values(2 * p1.values - 3j * p2.values), w0).values
    rhs = 2 * chang_reconstruct(p1, w0).values - 3j * chang_reconstruct(p2, w0).values
    assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(lhs).max()


def test_chang_equals_symmetrized_chain(small):
    grid, geom = small
    rng = np.random.default_rng(6)
    w0 = ScalarField(grid, 1 + 0.5 * grid.radius())
    for _ in range(3):
        p = random_sinogram(geom, rng)
        a = chang_reconstruct(p, w0).values
        b = chang_reconstruct_sym(p, w0).values
        assert np.abs(a - b).max() <= 1e-10 * np.abs(a).max()
    even, odd = even_odd_parts(random_sinogram(geom, rng).values, geom)
    pe = Sinogram(geom, even)
    assert np.array_equal(chang_reconstruct(pe, w0).values, chang_reconstruct_sym(pe, w0).values)
    ref = np.abs(chang_reconstruct(pe, w0).values).max()
    assert np.abs(chang_reconstruct(Sinogram(geom, odd), w0).values).max() <= 1e-10 * ref


def test_chang_degenerate_w0(small):
    grid, geom = small
    p = Sinogram(geom, np.ones(geom.shape))
    X, _ = grid.mesh()
    w0 = ScalarField(grid, np.where(np.abs(X) < 0.1, 0.0, 1.0))
    with pytest.raises(WeightDegenerate):
        chang_reconstruct(p, w0)
    # zeros outside the mask are tolerated
    w0 = ScalarField(grid, np.where(grid.radius() > 1.1, 0.0, 1.0))
    out = chang_reconstruct(p, w0)
    assert np.all(out.values[grid.radius() > 1.1] == 0)


def test_classical_fbp_examples(small, disk_field):
    grid, geom = small
    assert np.all(classical_fbp(Sinogram(geom, np.zeros(geom.shape)), grid).values == 0)
    p = forward_project(disk_field, Uniform(1.0), geom)
    rec = classical_fbp(p, grid)
    assert np.abs(classical_fbp(p.with_values(2 * p.values), grid).values - 2 * rec.values).max() <= 1e-13
    m = compare(disk_field, rec, grid.disk_mask(geom.mask_radius))
    assert m.rel_l2_masked < 0.08
    assert imag_leak(rec) <= 1e-10


def test_classical_fbp_refines():
    errs = []
    for n in (64, 128):
        grid = Grid2D.square(n, 1.2)
        geom = build_geometry(grid, int(360 * n / 256) // 2 * 2, n + 1, 1.2)
        from chang_radon.phantom import disk, make_phantom

        f = make_phantom(disk(1.0, 1.0, 0.0375), grid)
        rec = classical_fbp(forward_project(f, Uniform(1.0), geom), grid)
        errs.append(compare(f, rec, grid.disk_mask(geom.mask_radius)).rel_l2_masked)
    assert errs[1] < errs[0] / 1.5
