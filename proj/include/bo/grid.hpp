#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "bo/errors.hpp"

namespace bo {

using cd = std::complex<double>;

// Uniform truncated-line grid on [-L, L) with N nodes and its dual frequency
// grid. Frequency nodes are xi_m = m*pi/L for m in [-N/2, N/2), addressed in
// fftshift order by signed index.
struct Grid {
    double L = 40.0;
    int N = 2048;

    Grid() = default;
    Grid(double half_width, int point_count);

    double dx() const { return 2.0 * L / N; }
    double dxi() const { return M_PI / L; }
    double x(int i) const { return -L + i * dx(); }
    // Signed frequency for FFT bin index b in [0, N): m = b for b < N/2, b - N otherwise.
    int freq_index(int b) const { return b < N / 2 ? b : b - N; }
    double xi(int b) const { return freq_index(b) * dxi(); }
    double xi_max() const { return M_PI / dx(); }

    std::vector<double> nodes() const;
    bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

struct SampledFunction {
    Grid grid;
    std::vector<cd> values;

    SampledFunction() = default;
    explicit SampledFunction(const Grid& g) : grid(g), values(g.N, cd(0.0)) {}
    SampledFunction(const Grid& g, std::vector<cd> v);

    int size() const { return grid.N; }
    cd& operator[](int i) { return values[i]; }
    const cd& operator[](int i) const { return values[i]; }
};

double norm_inf(const SampledFunction& f);
double norm_l2(const SampledFunction& f);            // sqrt(dx * sum |f|^2)
cd inner(const SampledFunction& f, const SampledFunction& g); // dx * sum f conj(g)

struct GaussianFamily   { double a = 1.0, sigma = 1.0, x0 = 0.0; };
struct LorentzianFamily { double a = 1.0, nu = 1.0, x0 = 0.0; };
struct Sech2Family      { double a = 1.0, w = 1.0, x0 = 0.0; };
struct TabulatedFamily  { std::string source; };

using PotentialFamily = std::variant<GaussianFamily, LorentzianFamily, Sech2Family, TabulatedFamily>;

std::string family_name(const PotentialFamily& fam);

// Real decaying potential sampled on a grid, with analytic-family metadata and
// integral estimates. Truncation quality (|u| at the ends) is reported, not
// enforced.
struct Potential {
    Grid grid;
    std::vector<double> u;
    PotentialFamily family;
    double l1_norm = 0.0;
    double total_integral = 0.0;
    double boundary_magnitude = 0.0;

    static Potential make(const Grid& g, const PotentialFamily& fam);
    static Potential from_samples(const Grid& g, std::vector<double> samples,
                                  PotentialFamily fam = TabulatedFamily{});
    static Potential zero(const Grid& g);

    SampledFunction sampled() const;
    bool is_zero() const;
};

// Loads a two-column (x, u) text file with uniform x spacing and resamples it
// onto the target grid by linear interpolation (zero outside the table).
Potential load_tabulated_potential(const Grid& g, const std::string& path);

// --- Fourier/Hilbert/Cauchy primitives -------------------------------------
//
// Convention: forward(f)(xi) ~ \int e^{-i xi x} f(x) dx, inverse has the
// (1/2pi) e^{+i x xi} weight. Discretely these are dx-scaled FFTs with the
// (-1)^m phase absorbing the -L grid offset.

SampledFunction fourier_forward(const SampledFunction& f);
SampledFunction fourier_inverse(const SampledFunction& fhat);
SampledFunction hilbert_transform(const SampledFunction& f);

enum class HalfLine { plus, minus };
// Frequency restriction to the closed half-axis; the xi = 0 bin is split
// evenly between the two projections so that C+ + C- = I holds exactly.
SampledFunction cauchy_project(const SampledFunction& f, HalfLine sign);

SampledFunction plane_wave(const Grid& g, double lambda);

// Trapezoid integral of samples over [-L, L].
double integrate(const Grid& g, const std::vector<double>& v);
cd integrate(const Grid& g, const std::vector<cd>& v);
cd integrate(const SampledFunction& f);

// Cumulative trapezoid antiderivative: out[i] = \int_{-L}^{x_i} v.
std::vector<double> cumulative_integral(const Grid& g, const std::vector<double>& v);

// Raw unnormalized in-place DFT (thread-safe; per-thread cached plans).
void dft_inplace(std::vector<cd>& v, bool forward);

} // namespace bo
