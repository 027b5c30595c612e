#pragma once

// Exact arithmetic modulo a prime and on polynomials over F_p.

#include "picard/ff/modular.hpp"
#include "picard/ff/poly.hpp"
#include "picard/ff/power.hpp"
#include "picard/ff/sieve.hpp"
