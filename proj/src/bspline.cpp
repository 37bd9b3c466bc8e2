#include "kronschro/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kronschro {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : p_(degree), knots_(std::move(knots)) {
    if (p_ < 1)
        throw std::invalid_argument("KnotVector: degree must be >= 1");
    if (static_cast<int>(knots_.size()) < 2 * (p_ + 1))
        throw std::invalid_argument("KnotVector: too few knots");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
        throw std::invalid_argument("KnotVector: knots must be non-decreasing");
    const double a = knots_.front(), b = knots_.back();
    if (!(a < b))
        throw std::invalid_argument("KnotVector: empty interval");
    for (int i = 0; i <= p_; ++i) {
        if (knots_[i] != a || knots_[knots_.size() - 1 - i] != b)
            throw std::invalid_argument("KnotVector: knot vector is not open");
    }
    breakpoints_.push_back(a);
    for (double xi : knots_)
        if (xi != breakpoints_.back())
            breakpoints_.push_back(xi);
    // interior multiplicity <= p keeps the basis at least C^0
    for (std::size_t i = p_ + 1; i + p_ + 1 < knots_.size();) {
        std::size_t j = i;
        while (j < knots_.size() && knots_[j] == knots_[i])
            ++j;
        if (static_cast<int>(j - i) > p_)
            throw std::invalid_argument("KnotVector: interior multiplicity > p");
        i = j;
    }
}

KnotVector KnotVector::open_uniform(int p, int n_el, double a, double b) {
    if (p < 1 || n_el < 1 || !(a < b))
        throw std::invalid_argument("open_uniform: invalid arguments");
    std::vector<double> knots;
    knots.reserve(n_el + 2 * p + 1);
    for (int i = 0; i <= p; ++i)
        knots.push_back(a);
    for (int i = 1; i < n_el; ++i)
        knots.push_back(a + (b - a) * i / n_el);
    for (int i = 0; i <= p; ++i)
        knots.push_back(b);
    return KnotVector(p, std::move(knots));
}

double KnotVector::mesh_size() const {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        h = std::max(h, breakpoints_[i + 1] - breakpoints_[i]);
    return h;
}

int KnotVector::find_span(double x) const {
    if (x < a() || x > b())
        throw std::out_of_range("find_span: x outside [a, b]");
    const int m = dim();
    if (x >= knots_[m])
        return m - 1; // last span, covers x = b
    int lo = p_, hi = m;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (x < knots_[mid])
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

std::vector<double> KnotVector::greville() const {
    std::vector<double> g(dim());
    for (int i = 0; i < dim(); ++i) {
        double s = 0.0;
        for (int k = 1; k <= p_; ++k)
            s += knots_[i + k];
        g[i] = s / p_;
    }
    return g;
}

// Cox-de Boor recursion with derivatives (The NURBS Book, A2.3).
BasisValues eval_basis(const KnotVector& kv, double x, int nderiv) {
    const int p = kv.degree();
    if (nderiv < 0 || nderiv > p)
        throw std::invalid_argument("eval_basis: nderiv must be in [0, p]");
    const auto& U = kv.knots();
    const int span = kv.find_span(x);

    std::vector<double> ndu((p + 1) * (p + 1));
    auto NDU = [&](int i, int j) -> double& { return ndu[i * (p + 1) + j]; };
    std::vector<double> left(p + 1), right(p + 1);
    NDU(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            NDU(j, r) = right[r + 1] + left[j - r];
            double temp = NDU(r, j - 1) / NDU(j, r);
            NDU(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        NDU(j, j) = saved;
    }

    BasisValues out;
    out.span = span;
    out.first = span - p;
    out.nderiv = nderiv;
    out.ncols = p + 1;
    out.table.assign((nderiv + 1) * (p + 1), 0.0);
    auto D = [&](int k, int j) -> double& { return out.table[k * (p + 1) + j]; };

    for (int j = 0; j <= p; ++j)
        D(0, j) = NDU(j, p);

    std::vector<double> a(2 * (p + 1));
    auto A = [&](int i, int j) -> double& { return a[i * (p + 1) + j]; };
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        A(0, 0) = 1.0;
        for (int k = 1; k <= nderiv; ++k) {
            double dv = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                A(s2, 0) = A(s1, 0) / NDU(pk + 1, rk);
                dv = A(s2, 0) * NDU(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                A(s2, j) = (A(s1, j) - A(s1, j - 1)) / NDU(pk + 1, rk + j);
                dv += A(s2, j) * NDU(rk + j, pk);
            }
            if (r <= pk) {
                A(s2, k) = -A(s1, k - 1) / NDU(pk + 1, r);
                dv += A(s2, k) * NDU(r, pk);
            }
            D(k, r) = dv;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nderiv; ++k) {
        for (int j = 0; j <= p; ++j)
            D(k, j) *= factor;
        factor *= (p - k);
    }
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    if (n % 2 == 1)
        nodes[n / 2] = 0.0;
}

QuadratureRule element_quadrature(const KnotVector& kv, int npts) {
    if (npts < 1)
        throw std::invalid_argument("element_quadrature: npts must be >= 1");
    std::vector<double> gx, gw;
    gauss_legendre(npts, gx, gw);
    const auto& z = kv.breakpoints();
    QuadratureRule rule;
    rule.npts_per_element = npts;
    rule.nodes.reserve(npts * (z.size() - 1));
    rule.weights.reserve(npts * (z.size() - 1));
    for (std::size_t e = 0; e + 1 < z.size(); ++e) {
        const double mid = 0.5 * (z[e] + z[e + 1]);
        const double half = 0.5 * (z[e + 1] - z[e]);
        for (int q = 0; q < npts; ++q) {
            rule.nodes.push_back(mid + half * gx[q]);
            rule.weights.push_back(half * gw[q]);
        }
    }
    return rule;
}

} // namespace kronschro
