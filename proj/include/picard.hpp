#pragma once

#include "picard/ff_arith.hpp"
#include "picard/eisenstein.hpp"
#include "picard/curve_model.hpp"
#include "picard/cartier_manin.hpp"
#include "picard/lifting.hpp"
#include "picard/oracle_count.hpp"
#include "picard/driver.hpp"
