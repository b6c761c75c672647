#pragma once

#include "commutant/errors.hpp"
#include "commutant/jet.hpp"
#include "commutant/coefficient.hpp"
#include "commutant/kernel.hpp"
#include "commutant/families.hpp"
#include "commutant/identity.hpp"
#include "commutant/residuals.hpp"
#include "commutant/quadrature.hpp"
#include "commutant/discretization.hpp"
#include "commutant/spectra.hpp"
#include "commutant/normality.hpp"
#include "commutant/io.hpp"
#include "commutant/cli.hpp"
