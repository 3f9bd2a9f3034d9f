#include "bo/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace bo {

namespace {
const cd I(0.0, 1.0);
using Mat = Eigen::MatrixXcd;

std::vector<double> eigen_bottom(const Potential& u, int modes, double tol_edge) {
    Mat A = build_Lu(u, modes);
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    std::vector<double> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev < -tol_edge) out.push_back(ev);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Eigen::MatrixXcd build_Lu(const Potential& u, int modes) {
    const Grid& g = u.grid;
    const int M = modes > 0 ? modes : g.N / 2 - 1;
    if (M < 1 || M > g.N / 2 - 1) throw ConfigError("build_Lu: invalid mode count");
    SampledFunction uhat = fourier_forward(u.sampled());
    const double dxi = g.dxi();
    // Quadrature weights for the frequency integral over (0, inf): plain node
    // weight dxi except at the first mode, whose 3/2 weight extends the cell
    // down to xi = 0 (eigenfunction spectra jump at the edge; without the
    // correction the bottom eigenvalue carries an O(dxi) bias). The weighting
    // is symmetrized to keep the matrix Hermitian.
    auto wgt = [&](int c) { return c == 0 ? 1.5 : 1.0; };
    Mat A(M, M);
    for (int c = 0; c < M; ++c) {
        for (int r = 0; r < M; ++r) {
            const int diff = r - c; // (xi_r - xi_c)/dxi, |diff| <= M-1 < N/2
            const int bin = (diff % g.N + g.N) % g.N;
            A(r, c) = -uhat[bin] * dxi * std::sqrt(wgt(r) * wgt(c)) / (2.0 * M_PI);
        }
        A(c, c) += (c + 1) * dxi;
    }
    return A;
}

SampledFunction apply_Lu(const Potential& u, const SampledFunction& phi) {
    const Grid& g = u.grid;
    SampledFunction ph = fourier_forward(phi);
    for (int b = 0; b < g.N; ++b) ph[b] *= g.xi(b);
    SampledFunction dphi = fourier_inverse(ph); // (1/i) d/dx phi
    SampledFunction uphi(g);
    for (int i = 0; i < g.N; ++i) uphi[i] = u.u[i] * phi[i];
    SampledFunction proj = cauchy_project(uphi, HalfLine::plus);
    SampledFunction out(g);
    for (int i = 0; i < g.N; ++i) out[i] = dphi[i] - proj[i];
    return out;
}

double refine_nystrom_pole(const Potential& u, double seed, const SolveOptions& opts) {
    const int N = u.grid.N;

    // smallest-magnitude eigenvalue of (I - T_k) via inverse iteration
    auto mu_of = [&](cd k) -> cd {
        ToeplitzKernel lags =
            build_kernel_lags(family_G(SpectralPoint::off(k)), u.grid, opts.assembly);
        Mat F(N, N);
        for (int j = 0; j < N; ++j) {
            const double uj = u.u[j];
            for (int i = 0; i < N; ++i) F(i, j) = (i == j ? 1.0 : 0.0) - lags.lag(i - j) * uj;
        }
        Eigen::PartialPivLU<Mat> lu(F);
        Eigen::VectorXcd v = Eigen::VectorXcd::Ones(N);
        v.normalize();
        cd nu(0.0);
        for (int it = 0; it < 8; ++it) {
            Eigen::VectorXcd w = lu.solve(v);
            nu = v.dot(w); // v is unit-norm
            v = w / w.norm();
        }
        return 1.0 / nu;
    };

    cd k0(seed, 0.0);
    cd k1(seed * (1.0 + 1e-3) - 1e-4, 0.0);
    cd m0 = mu_of(k0), m1 = mu_of(k1);
    for (int it = 0; it < 12; ++it) {
        if (std::abs(m1 - m0) == 0.0) break;
        const cd k2 = k1 - m1 * (k1 - k0) / (m1 - m0);
        k0 = k1;
        m0 = m1;
        k1 = k2;
        if (std::abs(k1 - k0) < 1e-12 * std::max(1.0, std::abs(k1))) break;
        m1 = mu_of(k1);
        if (std::abs(m1) < 1e-13) break;
    }
    if (!(k1.real() < 0.0) || std::abs(k1.imag()) > 1e-4)
        throw NoConvergenceError("refine_nystrom_pole: secant left the negative real axis");
    return k1.real();
}

std::vector<EigenPair> discrete_spectrum(const Potential& u, const SpectrumOptions& sopts,
                                         const SolveOptions& opts) {
    const Grid& g = u.grid;
    const int M = g.N / 2 - 1;
    Mat A = build_Lu(u, M);
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success) throw Error("discrete_spectrum: eigensolver failed");

    std::vector<int> sel;
    for (int i = 0; i < M; ++i)
        if (es.eigenvalues()(i) < -sopts.tol_edge) sel.push_back(i);

    for (size_t a = 0; a + 1 < sel.size(); ++a) {
        const double gap = es.eigenvalues()(sel[a + 1]) - es.eigenvalues()(sel[a]);
        if (gap < sopts.gap_min)
            throw DegenerateEigenvalueError(
                "discrete spectrum gap below simplicity threshold (discretization failure)");
    }

    std::vector<double> half;
    if (sopts.refine && !sel.empty()) half = eigen_bottom(u, M / 2, sopts.tol_edge);

    std::vector<EigenPair> out;
    for (int idx : sel) {
        EigenPair p;
        p.lambda_seed = es.eigenvalues()(idx);
        p.lambda_j = p.lambda_seed;
        // map the spectral eigenvector back to the grid, undoing the
        // symmetrizing W^{1/2} scaling of the first mode
        SampledFunction spec(g);
        for (int m = 1; m <= M; ++m)
            spec[m] = es.eigenvectors()(m - 1, idx) / (m == 1 ? std::sqrt(1.5) : 1.0);
        p.phi_j = fourier_inverse(spec);
        const double n2 = norm_l2(p.phi_j);
        // deterministic phase: largest sample real positive
        int imax = 0;
        for (int i = 0; i < g.N; ++i)
            if (std::abs(p.phi_j[i]) > std::abs(p.phi_j[imax])) imax = i;
        const cd rot = std::abs(p.phi_j[imax]) / (p.phi_j[imax] * n2);
        for (auto& v : p.phi_j.values) v *= rot;

        p.uncertainty = 1e-2;
        for (double hv : half) p.uncertainty = std::min(p.uncertainty, std::abs(hv - p.lambda_seed));
        if (sopts.refine_poles) p.lambda_j = refine_nystrom_pole(u, p.lambda_seed, opts);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.lambda_j < b.lambda_j; });
    return out;
}

LaurentExtraction extract_laurent(const Grid& g, double h,
                                  const std::function<SampledFunction(double)>& m1_probe,
                                  double window_half_width) {
    const int N = g.N;
    SampledFunction m_h = m1_probe(h), m_2h = m1_probe(2.0 * h), m_4h = m1_probe(4.0 * h);

    auto richardson = [N](const std::vector<cd>& fh, const std::vector<cd>& f2h,
                          const std::vector<cd>& f4h) {
        std::vector<cd> out(N);
        for (int i = 0; i < N; ++i) out[i] = (8.0 * fh[i] - 6.0 * f2h[i] + f4h[i]) / 3.0;
        return out;
    };

    // residue: phi = lim i (k - lambda_j) m1(k)
    std::vector<cd> rh(N), r2h(N), r4h(N);
    for (int i = 0; i < N; ++i) {
        rh[i] = I * h * m_h[i];
        r2h[i] = I * 2.0 * h * m_2h[i];
        r4h[i] = I * 4.0 * h * m_4h[i];
    }
    std::vector<cd> phi = richardson(rh, r2h, r4h);

    // regular part: g = m1(k) + i phi/(k - lambda_j) -> (x + gamma) phi
    std::vector<cd> gh(N), g2h(N), g4h(N);
    for (int i = 0; i < N; ++i) {
        gh[i] = m_h[i] + I * phi[i] / h;
        g2h[i] = m_2h[i] + I * phi[i] / (2.0 * h);
        g4h[i] = m_4h[i] + I * phi[i] / (4.0 * h);
    }
    std::vector<cd> greg = richardson(gh, g2h, g4h);

    // least-squares fit of gamma on the central window
    cd num = 0.0, den = 0.0;
    double misfit_den = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = g.x(i);
        if (std::abs(x) > window_half_width) continue;
        num += (greg[i] - x * phi[i]) * std::conj(phi[i]);
        den += phi[i] * std::conj(phi[i]);
        misfit_den += std::norm(greg[i]);
    }
    if (std::abs(den) == 0.0)
        throw PoorFitError("extract_laurent: vanishing eigenfunction window", 1.0);
    LaurentExtraction out;
    out.gamma = num / den;
    double misfit = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = g.x(i);
        if (std::abs(x) > window_half_width) continue;
        misfit += std::norm(greg[i] - (x + out.gamma) * phi[i]);
    }
    out.misfit = std::sqrt(misfit / std::max(misfit_den, 1e-300));
    out.phi = SampledFunction(g, std::move(phi));
    return out;
}

void phase_constant(const Potential& u, EigenPair& pair, const std::vector<double>& eigenvalues,
                    const SolveOptions& opts_in) {
    const Grid& g = u.grid;
    const double lj = pair.lambda_j;

    SolveOptions opts = opts_in;
    opts.eigenvalues = eigenvalues;
    opts.exclusion_radius = std::max(1e-3, 10.0 * pair.uncertainty);

    // probe spacing: clear the exclusion radius but stay well inside the gap
    // to the next spectral obstruction (the neighbor eigenvalue or the edge)
    double upper = 0.0;
    for (double ev : eigenvalues)
        if (ev > lj + 1e-12) upper = std::min(upper, ev);
    const double gap = upper - lj;
    double h = std::max(2.0 * opts.exclusion_radius, 0.007 * std::abs(lj));
    h = std::min(h, gap / 8.0);
    if (!(h > opts.exclusion_radius))
        throw PoorFitError("phase_constant: probe spacing collapsed inside the exclusion radius",
                           h);

    LaurentExtraction ex = extract_laurent(
        g, h,
        [&](double delta) {
            return solve_m1(u, SpectralPoint::off(cd(lj + delta, 0.0)), opts).values;
        },
        g.L / 2.0);
    if (!(ex.misfit < 1e-3))
        throw PoorFitError("phase_constant: Laurent fit misfit above tolerance", ex.misfit);

    pair.phi_j = std::move(ex.phi);
    pair.gamma_j = ex.gamma;
    pair.residue_residual = ex.misfit;
    pair.gamma_valid = true;
}

} // namespace bo
