#pragma once

#include "surfnitsche/analysis.hpp"
#include "surfnitsche/assembly.hpp"
#include "surfnitsche/element_geometry.hpp"
#include "surfnitsche/error.hpp"
#include "surfnitsche/io.hpp"
#include "surfnitsche/linear_solver.hpp"
#include "surfnitsche/mesh.hpp"
#include "surfnitsche/mesh_gen.hpp"
#include "surfnitsche/quadrature.hpp"
#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/sparse.hpp"
#include "surfnitsche/surface_geometry.hpp"
#include "surfnitsche/types.hpp"
