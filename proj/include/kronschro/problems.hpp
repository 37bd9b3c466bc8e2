#pragma once

#include <string>

#include "kronschro/assembly.hpp"

namespace kronschro {

/// Exact solution u with closed-form data f = i du/dt - nu Laplacian u;
/// boundary/initial traces are restrictions of u.
struct ManufacturedSolution {
    std::string name;
    int d = 1;
    double T = 1.0;
    double nu = 1.0;
    bool homogeneous = false; // zero Dirichlet and initial data
    SpaceTimeFn u;
    SpaceTimeFn f;
};

/// u = ab/sqrt(b^2 - i c t) exp(-x^2/(b^2 - i c t)) with a = b = 1.5,
/// c = 2.5, on (0,2) x (0,1), nu = 1; nonhomogeneous traces.
ManufacturedSolution gaussian_1d();

/// Truncated mode expansion u = sum_{k<=M} (-i t / k) e^{i (k pi)^2 t}
/// sqrt(2) sin(k pi x) on (0,2) x (0,1); homogeneous traces.
ManufacturedSolution high_mode_1d(int M = 625);

/// u = a exp(-i (|x|^2 + t^2)/w^2), w = 0.2, a = (2/w^2)^{1/4}, on
/// (0,1) x (0,1)^2; nonhomogeneous traces.
ManufacturedSolution traveling_wave_2d();

ManufacturedSolution find_problem(const std::string& name);

} // namespace kronschro
