#include "bo/expint.hpp"

#include <cmath>
#include <limits>

#include "bo/errors.hpp"

namespace bo::expint {

namespace {

using cld = std::complex<long double>;

// Modified Lentz evaluation of F(z) = e^z E1(z) via the continued fraction
//   F = 1/(z+1-) 1^2/(z+3-) 2^2/(z+5-) ...
// Converges on the cut plane; used away from the negative real axis where
// convergence is fast.
cd cf_lentz(cd z) {
    const double tiny = 1e-300;
    cd b = z + 1.0;
    cd f = (b == cd(0.0)) ? cd(tiny) : b;
    cd C = f, D = 0.0;
    for (int j = 1; j < 800; ++j) {
        const double a = -double(j) * double(j);
        b = z + double(2 * j + 1);
        D = b + a * D;
        if (D == cd(0.0)) D = tiny;
        C = b + a / C;
        if (C == cd(0.0)) C = tiny;
        D = 1.0 / D;
        const cd delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return 1.0 / f;
    }
    return 1.0 / f; // slow-convergence tail; residual below target tolerances
}

// Divergent asymptotic series F ~ (1/z) sum (-1)^n n!/z^n truncated at the
// smallest term. Adequate for |z| >~ 45 at double precision.
cd asym_series(cd z) {
    cd sum = 1.0, term = 1.0;
    double prev = 1.0;
    for (int n = 1; n < 120; ++n) {
        term *= -double(n) / z;
        const double a = std::abs(term);
        if (a >= prev) break;
        sum += term;
        prev = a;
        if (a < 1e-18 * std::abs(sum)) break;
    }
    return sum / z;
}

cd series_F(cd z) {
    const cd e = entire_series(z);
    return std::exp(z) * (e - euler_gamma - std::log(z));
}

} // namespace

cd entire_series(cd z) {
    cld term(1.0L, 0.0L), sum(0.0L, 0.0L);
    const cld zl(static_cast<long double>(z.real()), static_cast<long double>(z.imag()));
    for (int n = 1; n < 400; ++n) {
        term *= -zl / static_cast<long double>(n);
        const cld add = -term / static_cast<long double>(n);
        sum += add;
        if (std::abs(add) < 1e-20L * (std::abs(sum) + 1e-30L)) break;
    }
    return cd(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

double exp_ei(double t) {
    if (!(t > 0.0)) throw Error("exp_ei requires t > 0");
    if (t <= 44.0) {
        long double term = 1.0L, sum = 0.0L;
        for (int n = 1; n < 400; ++n) {
            term *= static_cast<long double>(t) / n;
            const long double add = term / n;
            sum += add;
            if (add < 1e-20L * sum) break;
        }
        const long double ei = euler_gamma + std::log(static_cast<long double>(t)) + sum;
        return static_cast<double>(std::exp(-static_cast<long double>(t)) * ei);
    }
    double sum = 1.0, term = 1.0, prev = 1.0;
    for (int n = 1; n < 120; ++n) {
        term *= double(n) / t;
        if (term >= prev) break;
        sum += term;
        prev = term;
        if (term < 1e-18 * sum) break;
    }
    return sum / t;
}

cd expE1(cd z) {
    const double r = std::abs(z);
    if (r == 0.0) throw Error("expE1 is singular at z = 0");
    if (z.imag() == 0.0 && z.real() < 0.0)
        throw Error("expE1 called on the branch cut; use expE1_cut");
    if (r <= 4.0) return series_F(z);
    if (r > 48.0) {
        // CF degrades near the cut; the truncated asymptotic series is uniformly
        // accurate at this radius for |arg z| >= ~2.3.
        if (std::abs(std::arg(z)) >= 2.3) return asym_series(z);
        return cf_lentz(z);
    }
    // 4 < r <= 48: series when cancellation is controlled (|z| + Re z small,
    // i.e. near the negative axis), CF otherwise.
    if (r + z.real() <= 12.0) return series_F(z);
    return cf_lentz(z);
}

cd expE1_cut(double t, int side) {
    if (!(t > 0.0)) throw Error("expE1_cut requires t > 0");
    const double em = (t > 700.0) ? 0.0 : std::exp(-t);
    return cd(-exp_ei(t), -side * M_PI * em);
}

cd E1(cd z) { return std::exp(-z) * expE1(z); }

} // namespace bo::expint
