#pragma once

#include "errors.hpp"
#include "mesh.hpp"
#include "spaces.hpp"
#include "quadrature.hpp"
#include "assembly.hpp"
#include "contact.hpp"
#include "solver.hpp"
#include "problems.hpp"
#include "harness.hpp"
