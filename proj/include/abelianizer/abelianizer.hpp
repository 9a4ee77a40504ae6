#pragma once

#include "abelianizer/scalar.hpp"
#include "abelianizer/polynomial.hpp"
#include "abelianizer/combinatorics.hpp"
#include "abelianizer/report.hpp"
#include "abelianizer/cohomology.hpp"
#include "abelianizer/qde.hpp"
#include "abelianizer/abelian_gw.hpp"
#include "abelianizer/grass_qh.hpp"
#include "abelianizer/correspondence.hpp"
#include "abelianizer/jfunctions.hpp"
#include "abelianizer/suites.hpp"
#include "abelianizer/tables.hpp"
