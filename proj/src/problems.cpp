#include "kronschro/problems.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace kronschro {

ManufacturedSolution gaussian_1d() {
    const double alpha = 1.5, beta = 1.5, gamma = 2.5;
    ManufacturedSolution s;
    s.name = "gaussian_1d";
    s.d = 1;
    s.T = 2.0;
    s.nu = 1.0;
    s.homogeneous = false;
    auto uval = [=](double t, std::span<const double> x) {
        const cplx z(beta * beta, -gamma * t);
        return alpha * beta / std::sqrt(z) * std::exp(-x[0] * x[0] / z);
    };
    s.u = uval;
    s.f = [=](double t, std::span<const double> x) {
        const cplx z(beta * beta, -gamma * t);
        const double x2 = x[0] * x[0];
        // i du/dt = gamma (x^2/z^2 - 1/(2z)) u;  -d2u/dx2 = (2/z - 4x^2/z^2) u
        const cplx factor =
            gamma * (x2 / (z * z) - 0.5 / z) - (4.0 * x2 / (z * z) - 2.0 / z);
        return uval(t, x) * factor;
    };
    return s;
}

ManufacturedSolution high_mode_1d(int M) {
    if (M < 1)
        throw std::invalid_argument("high_mode_1d: M >= 1 required");
    const double pi = std::numbers::pi;
    ManufacturedSolution s;
    s.name = "high_mode_1d";
    s.d = 1;
    s.T = 2.0;
    s.nu = 1.0;
    s.homogeneous = true;

    // Both sums are separable: cache the time factors per distinct t
    // (quadrature scans t fastest) and the sine table per current x.
    struct Cache {
        std::map<double, std::vector<cplx>> time_u, time_f;
        double last_x = -1.0;
        std::vector<double> sines;
    };
    auto cache = std::make_shared<Cache>();
    auto sines_at = [cache, M, pi](double x) -> const std::vector<double>& {
        if (cache->sines.empty() || x != cache->last_x) {
            cache->sines.resize(M);
            for (int k = 1; k <= M; ++k)
                cache->sines[k - 1] = std::sqrt(2.0) * std::sin(k * pi * x);
            cache->last_x = x;
        }
        return cache->sines;
    };
    auto time_factors = [M, pi](std::map<double, std::vector<cplx>>& store,
                                double t, bool solution) -> const std::vector<cplx>& {
        auto it = store.find(t);
        if (it == store.end()) {
            std::vector<cplx> c(M);
            for (int k = 1; k <= M; ++k) {
                const double w2 = k * pi * k * pi;
                const cplx phase = std::exp(cplx(0, w2 * t));
                c[k - 1] = solution ? cplx(0, -t / k) * phase : phase / double(k);
            }
            it = store.emplace(t, std::move(c)).first;
        }
        return it->second;
    };
    s.u = [cache, sines_at, time_factors](double t, std::span<const double> x) {
        const auto& sn = sines_at(x[0]);
        const auto& c = time_factors(cache->time_u, t, true);
        cplx acc(0);
        for (std::size_t k = 0; k < sn.size(); ++k)
            acc += c[k] * sn[k];
        return acc;
    };
    s.f = [cache, sines_at, time_factors](double t, std::span<const double> x) {
        const auto& sn = sines_at(x[0]);
        const auto& c = time_factors(cache->time_f, t, false);
        cplx acc(0);
        for (std::size_t k = 0; k < sn.size(); ++k)
            acc += c[k] * sn[k];
        return acc;
    };
    return s;
}

ManufacturedSolution traveling_wave_2d() {
    const double w = 0.2;
    const double a = std::pow(2.0 / (w * w), 0.25);
    const double iw2 = 1.0 / (w * w);
    ManufacturedSolution s;
    s.name = "traveling_wave_2d";
    s.d = 2;
    s.T = 1.0;
    s.nu = 1.0;
    s.homogeneous = false;
    auto uval = [=](double t, std::span<const double> x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return a * std::exp(cplx(0, -(r2 + t * t) * iw2));
    };
    s.u = uval;
    s.f = [=](double t, std::span<const double> x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const cplx factor(4.0 * r2 * iw2 * iw2 + 2.0 * t * iw2, 4.0 * iw2);
        return uval(t, x) * factor;
    };
    return s;
}

ManufacturedSolution find_problem(const std::string& name) {
    if (name == "gaussian_1d")
        return gaussian_1d();
    if (name == "high_mode_1d")
        return high_mode_1d();
    if (name == "traveling_wave_2d")
        return traveling_wave_2d();
    throw std::invalid_argument("unknown problem: " + name);
}

} // namespace kronschro
