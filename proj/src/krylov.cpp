#include "kronschro/krylov.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "kronschro/kernels.hpp"

namespace kronschro {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

} // namespace

SolveReport pcg(const ApplyFn& apply_a, const ApplyFn& apply_p,
                const std::vector<cplx>& b, const PcgOptions& opts) {
    if (!(opts.tol > 0) || opts.maxit < 0)
        throw std::invalid_argument("pcg: bad options");
    const std::size_t n = b.size();
    SolveReport rep;
    rep.x.assign(n, cplx(0));
    const auto t_start = clock_t_::now();

    const double bnorm = std::sqrt(kernels::norm2sq(b.data(), n));
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.solve_seconds = seconds_since(t_start);
        return rep;
    }

    auto matvec = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
        const auto t0 = clock_t_::now();
        apply_a(x.data(), y.data());
        rep.matvec_seconds += seconds_since(t0);
    };
    auto precond = [&](const std::vector<cplx>& r, std::vector<cplx>& z) {
        if (apply_p) {
            const auto t0 = clock_t_::now();
            apply_p(r.data(), z.data());
            rep.precond_seconds += seconds_since(t0);
        } else {
            z = r;
        }
    };
    auto true_relres = [&](std::vector<cplx>& scratch) {
        matvec(rep.x, scratch);
        kernels::axpy(-1.0, b.data(), scratch.data(), n); // Ax - b
        return std::sqrt(kernels::norm2sq(scratch.data(), n)) / bnorm;
    };

    std::vector<cplx> r = b, z(n), p(n), q(n), scratch(n);
    precond(r, z);
    p = z;
    double rho = kernels::dotc(r.data(), z.data(), n).real();
    int restarts = 0;

    for (int k = 0; k < opts.maxit; ++k) {
        matvec(p, q);
        const double curvature = kernels::dotc(p.data(), q.data(), n).real();
        if (curvature <= 0.0) {
            rep.breakdown = true;
            break;
        }
        const double alpha = rho / curvature;
        kernels::axpy(alpha, p.data(), rep.x.data(), n);
        kernels::axpy(-alpha, q.data(), r.data(), n);
        ++rep.iterations;

        double relres = std::sqrt(kernels::norm2sq(r.data(), n)) / bnorm;
        if (opts.strict_residual)
            relres = true_relres(scratch);
        rep.res_history.push_back(relres);

        if (relres <= opts.tol) {
            if (!opts.strict_residual) {
                const double tr = true_relres(scratch);
                rep.res_history.back() = tr;
                if (tr > opts.tol) {
                    // recurrence drifted below the attainable accuracy;
                    // restart from the exact residual a couple of times,
                    // then accept the floor
                    if (++restarts > 2)
                        break;
                    r = scratch;
                    for (auto& v : r)
                        v = -v;
                    precond(r, z);
                    p = z;
                    rho = kernels::dotc(r.data(), z.data(), n).real();
                    continue;
                }
            }
            rep.converged = true;
            break;
        }
        precond(r, z);
        const double rho_new = kernels::dotc(r.data(), z.data(), n).real();
        const double beta = rho_new / rho;
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
    }
    rep.solve_seconds = seconds_since(t_start);
    return rep;
}

double lanczos_extreme_eigenvalue(const ApplyFn& apply_t, const ApplyFn& apply_b,
                                  std::size_t n, int steps, bool largest,
                                  std::uint64_t seed) {
    steps = std::min<int>(steps, static_cast<int>(n));
    if (steps < 1)
        throw std::invalid_argument("lanczos_extreme_eigenvalue: steps < 1");

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    std::vector<std::vector<cplx>> V, BV; // B-orthonormal basis and B*V
    std::vector<double> alpha, beta;

    std::vector<cplx> v(n), bv(n), w(n), bw(n), t(n);
    for (auto& c : v)
        c = cplx(dist(gen), dist(gen));
    apply_b(v.data(), bv.data());
    double nrm = std::sqrt(kernels::dotc(v.data(), bv.data(), n).real());
    if (!(nrm > 0))
        throw std::runtime_error("lanczos_extreme_eigenvalue: B not positive");
    for (std::size_t i = 0; i < n; ++i) {
        v[i] /= nrm;
        bv[i] /= nrm;
    }
    V.push_back(v);
    BV.push_back(bv);

    for (int j = 0; j < steps; ++j) {
        apply_t(V[j].data(), t.data());
        alpha.push_back(kernels::dotc(BV[j].data(), t.data(), n).real());
        w = t;
        // full reorthogonalization in the B-inner product
        for (std::size_t i = 0; i < V.size(); ++i) {
            const cplx c = kernels::dotc(BV[i].data(), w.data(), n);
            kernels::axpy(-c, V[i].data(), w.data(), n);
        }
        apply_b(w.data(), bw.data());
        const double b2 = kernels::dotc(w.data(), bw.data(), n).real();
        if (!(b2 > 1e-28)) {
            break; // invariant subspace found
        }
        const double bnorm = std::sqrt(b2);
        beta.push_back(bnorm);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= bnorm;
            bw[i] /= bnorm;
        }
        if (j + 1 < steps) {
            V.push_back(w);
            BV.push_back(bw);
        }
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        Tm(i, i) = alpha[i];
        if (i + 1 < m) {
            Tm(i, i + 1) = beta[i];
            Tm(i + 1, i) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm, Eigen::EigenvaluesOnly);
    return largest ? es.eigenvalues().maxCoeff() : es.eigenvalues().minCoeff();
}

} // namespace kronschro
