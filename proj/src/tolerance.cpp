#include "varsel/tolerance.hpp"

#include <cstdlib>

namespace varsel {

double set_tol() {
  static const double tol = [] {
    if (const char* env = std::getenv("VARSEL_TOL")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

}  // namespace varsel
