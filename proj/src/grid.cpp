#include "bo/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace bo {

Grid::Grid(double half_width, int point_count) : L(half_width), N(point_count) {
    if (!(L > 0.0)) throw ConfigError("grid half-width L must be positive", "grid.L");
    if (N <= 0 || N % 2 != 0) throw ConfigError("grid point count N must be a positive even integer", "grid.N");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(N);
    for (int i = 0; i < N; ++i) xs[i] = x(i);
    return xs;
}

SampledFunction::SampledFunction(const Grid& g, std::vector<cd> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.N)
        throw ConfigError("sample count does not match grid point count");
}

double norm_inf(const SampledFunction& f) {
    double m = 0.0;
    for (const cd& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_l2(const SampledFunction& f) {
    double s = 0.0;
    for (const cd& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.dx());
}

cd inner(const SampledFunction& f, const SampledFunction& g) {
    cd s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return s * f.grid.dx();
}

std::string family_name(const PotentialFamily& fam) {
    if (std::holds_alternative<GaussianFamily>(fam)) return "gaussian";
    if (std::holds_alternative<LorentzianFamily>(fam)) return "lorentzian";
    if (std::holds_alternative<Sech2Family>(fam)) return "sech2";
    return "tabulated";
}

namespace {

double eval_family(const PotentialFamily& fam, double x) {
    if (const auto* g = std::get_if<GaussianFamily>(&fam)) {
        const double t = (x - g->x0) / g->sigma;
        return g->a * std::exp(-t * t);
    }
    if (const auto* l = std::get_if<LorentzianFamily>(&fam)) {
        const double t = (x - l->x0) / l->nu;
        return l->a / (1.0 + t * t);
    }
    if (const auto* s = std::get_if<Sech2Family>(&fam)) {
        const double t = (x - s->x0) / s->w;
        const double c = 1.0 / std::cosh(t);
        return s->a * c * c;
    }
    throw ConfigError("tabulated potentials cannot be evaluated analytically");
}

void fill_stats(Potential& p) {
    std::vector<double> au(p.u.size());
    for (size_t i = 0; i < p.u.size(); ++i) au[i] = std::abs(p.u[i]);
    p.l1_norm = integrate(p.grid, au);
    p.total_integral = integrate(p.grid, p.u);
    p.boundary_magnitude = std::max(std::abs(p.u.front()), std::abs(p.u.back()));
}

} // namespace

Potential Potential::make(const Grid& g, const PotentialFamily& fam) {
    Potential p;
    p.grid = g;
    p.family = fam;
    p.u.resize(g.N);
    for (int i = 0; i < g.N; ++i) p.u[i] = eval_family(fam, g.x(i));
    fill_stats(p);
    return p;
}

Potential Potential::from_samples(const Grid& g, std::vector<double> samples, PotentialFamily fam) {
    if (static_cast<int>(samples.size()) != g.N)
        throw ConfigError("sample count does not match grid point count");
    Potential p;
    p.grid = g;
    p.family = std::move(fam);
    p.u = std::move(samples);
    fill_stats(p);
    return p;
}

Potential Potential::zero(const Grid& g) {
    return from_samples(g, std::vector<double>(g.N, 0.0), TabulatedFamily{"zero"});
}

SampledFunction Potential::sampled() const {
    SampledFunction f(grid);
    for (int i = 0; i < grid.N; ++i) f[i] = u[i];
    return f;
}

bool Potential::is_zero() const {
    for (double v : u)
        if (v != 0.0) return false;
    return true;
}

Potential load_tabulated_potential(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tabulated potential file: " + path, "potential.path");
    std::vector<double> xs, us;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x, u;
        if (!(ls >> x >> u)) throw ConfigError("malformed line in tabulated potential: " + line, "potential.path");
        xs.push_back(x);
        us.push_back(u);
    }
    if (xs.size() < 2) throw ConfigError("tabulated potential needs at least two rows", "potential.path");
    const double h = xs[1] - xs[0];
    for (size_t i = 1; i < xs.size(); ++i)
        if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ConfigError("tabulated potential grid is not uniform", "potential.path");
    std::vector<double> samples(g.N, 0.0);
    for (int i = 0; i < g.N; ++i) {
        const double x = g.x(i);
        const double t = (x - xs.front()) / h;
        if (t < 0.0 || t > double(xs.size() - 1)) continue;
        const int j = std::min<int>(static_cast<int>(t), static_cast<int>(xs.size()) - 2);
        const double w = t - j;
        samples[i] = (1.0 - w) * us[j] + w * us[j + 1];
    }
    return Potential::from_samples(g, std::move(samples), TabulatedFamily{path});
}

// --- FFT machinery ----------------------------------------------------------

namespace {

struct PlanSet {
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* buf = nullptr;
    int N = 0;
    ~PlanSet() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW planning is not thread-safe; executing distinct plans is. Each thread
// keeps its own in-place plans per transform size.
PlanSet& plans_for(int N) {
    thread_local std::map<int, PlanSet> cache;
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    PlanSet& ps = cache[N];
    ps.N = N;
    ps.buf = fftw_alloc_complex(N);
    std::lock_guard<std::mutex> lk(planner_mutex());
    ps.fwd = fftw_plan_dft_1d(N, ps.buf, ps.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    ps.bwd = fftw_plan_dft_1d(N, ps.buf, ps.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    return ps;
}

enum class Dir { forward, backward };

void run_fft(std::vector<cd>& v, Dir d) {
    PlanSet& ps = plans_for(static_cast<int>(v.size()));
    auto* b = reinterpret_cast<cd*>(ps.buf);
    std::copy(v.begin(), v.end(), b);
    fftw_execute(d == Dir::forward ? ps.fwd : ps.bwd);
    std::copy(b, b + v.size(), v.begin());
}

} // namespace

SampledFunction fourier_forward(const SampledFunction& f) {
    const Grid& g = f.grid;
    SampledFunction out(g);
    out.values = f.values;
    run_fft(out.values, Dir::forward);
    const double dx = g.dx();
    for (int b = 0; b < g.N; ++b) {
        const double phase = (g.freq_index(b) % 2 == 0) ? 1.0 : -1.0;
        out.values[b] *= dx * phase;
    }
    return out;
}

SampledFunction fourier_inverse(const SampledFunction& fhat) {
    const Grid& g = fhat.grid;
    SampledFunction out(g);
    out.values = fhat.values;
    for (int b = 0; b < g.N; ++b) {
        const double phase = (g.freq_index(b) % 2 == 0) ? 1.0 : -1.0;
        out.values[b] *= phase;
    }
    run_fft(out.values, Dir::backward);
    const double s = 1.0 / (g.N * g.dx());
    for (auto& v : out.values) v *= s;
    return out;
}

SampledFunction hilbert_transform(const SampledFunction& f) {
    SampledFunction fh = fourier_forward(f);
    for (int b = 0; b < f.grid.N; ++b) {
        const int m = f.grid.freq_index(b);
        const double sgn = (m > 0) - (m < 0);
        fh.values[b] *= cd(0.0, -sgn);
    }
    return fourier_inverse(fh);
}

SampledFunction cauchy_project(const SampledFunction& f, HalfLine sign) {
    SampledFunction fh = fourier_forward(f);
    for (int b = 0; b < f.grid.N; ++b) {
        const int m = f.grid.freq_index(b);
        double w;
        if (m == 0)
            w = 0.5;
        else if (m > 0)
            w = (sign == HalfLine::plus) ? 1.0 : 0.0;
        else
            w = (sign == HalfLine::minus) ? 1.0 : 0.0;
        fh.values[b] *= w;
    }
    return fourier_inverse(fh);
}

SampledFunction plane_wave(const Grid& g, double lambda) {
    SampledFunction f(g);
    for (int i = 0; i < g.N; ++i) f[i] = std::exp(cd(0.0, lambda * g.x(i)));
    return f;
}

double integrate(const Grid& g, const std::vector<double>& v) {
    double s = 0.5 * (v.front() + v.back());
    for (int i = 1; i + 1 < g.N; ++i) s += v[i];
    return s * g.dx();
}

cd integrate(const Grid& g, const std::vector<cd>& v) {
    cd s = 0.5 * (v.front() + v.back());
    for (int i = 1; i + 1 < g.N; ++i) s += v[i];
    return s * g.dx();
}

cd integrate(const SampledFunction& f) { return integrate(f.grid, f.values); }

std::vector<double> cumulative_integral(const Grid& g, const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    const double h = g.dx();
    for (size_t i = 1; i < v.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    return out;
}

void dft_inplace(std::vector<cd>& v, bool forward) {
    run_fft(v, forward ? Dir::forward : Dir::backward);
}

} // namespace bo
