#pragma once

// Spectral Galerkin solver for initial-value ODEs on [0, 1] in the Bernoulli
// polynomial basis, built on exact-rational operational matrices.

#include "bopmat/benchmarks.hpp"
#include "bopmat/bernoulli.hpp"
#include "bopmat/matrix.hpp"
#include "bopmat/operational.hpp"
#include "bopmat/problem_file.hpp"
#include "bopmat/quadrature.hpp"
#include "bopmat/rational.hpp"
#include "bopmat/report.hpp"
#include "bopmat/solver.hpp"
