#pragma once

#include "serrin/bifurcation.hpp"
#include "serrin/branch.hpp"
#include "serrin/error.hpp"
#include "serrin/field.hpp"
#include "serrin/geometry.hpp"
#include "serrin/harmonics.hpp"
#include "serrin/io.hpp"
#include "serrin/parallel.hpp"
#include "serrin/pde.hpp"
#include "serrin/quadrature.hpp"
#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"
