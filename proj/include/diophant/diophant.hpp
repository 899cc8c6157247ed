#pragma once

// Umbrella header.

#include "diophant/error.hpp"
#include "diophant/exponents.hpp"
#include "diophant/forms.hpp"
#include "diophant/gallery.hpp"
#include "diophant/intvec.hpp"
#include "diophant/io.hpp"
#include "diophant/ledger.hpp"
#include "diophant/minimal_points.hpp"
#include "diophant/polynomial.hpp"
#include "diophant/quadratic.hpp"
#include "diophant/rational.hpp"
#include "diophant/real.hpp"
#include "diophant/structure.hpp"
#include "diophant/theta.hpp"
