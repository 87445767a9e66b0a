#pragma once

#include "hzeta/errors.hpp"
#include "hzeta/arith.hpp"
#include "hzeta/cyclotomic.hpp"
#include "hzeta/characters.hpp"
#include "hzeta/periodic.hpp"
#include "hzeta/precision.hpp"
#include "hzeta/zeta.hpp"
#include "hzeta/dirichlet.hpp"
#include "hzeta/parallel.hpp"
#include "hzeta/zeros.hpp"
#include "hzeta/structure.hpp"
#include "hzeta/ideals.hpp"
#include "hzeta/density.hpp"
#include "hzeta/bohr.hpp"
#include "hzeta/construction.hpp"
#include "hzeta/report.hpp"
