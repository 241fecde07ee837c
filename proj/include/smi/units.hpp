#pragma once

#include <cmath>

#include "smi/types.hpp"

namespace smi {

inline Real dbm_to_watts(Real x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

inline Real watts_to_dbm(Real watts) { return 10.0 * std::log10(watts) + 30.0; }

inline Real db_to_linear(Real x_db) { return std::pow(10.0, x_db / 10.0); }

inline Real linear_to_db(Real x) { return 10.0 * std::log10(x); }

inline Real deg_to_rad(Real deg) { return deg * M_PI / 180.0; }

inline Real rad_to_deg(Real rad) { return rad * 180.0 / M_PI; }

inline Real nats_to_bits(Real nats) { return nats / M_LN2; }

}  // namespace smi
