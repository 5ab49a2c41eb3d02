#pragma once

// Umbrella header.

#include "rational.hpp"
#include "cyclo.hpp"
#include "intlinalg.hpp"
#include "cartan.hpp"
#include "shuffle.hpp"
#include "repcat.hpp"
#include "ribbon.hpp"
#include "braidmono.hpp"
