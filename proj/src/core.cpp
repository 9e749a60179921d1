#include "landau/core.hpp"

#include <cstdlib>
#include <thread>

namespace landau {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::kernel_assembly: return "kernel-assembly";
    case ErrorKind::unreachable_target: return "unreachable-target";
    case ErrorKind::derivative_estimation: return "derivative-estimation";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::quantization_quality: return "quantization-quality";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::enclosure_violation: return "enclosure-violation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

bool CheckReport::has(const std::string& key) const {
  for (const auto& m : metrics)
    if (m.name == key) return true;
  return false;
}

double CheckReport::get(const std::string& key) const {
  for (const auto& m : metrics)
    if (m.name == key) return m.value;
  throw Error(ErrorKind::invalid_input, "report " + name + " has no metric " + key);
}

int worker_count() {
  if (const char* env = std::getenv("LANDAU_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorKind::invalid_input, std::string(what) + " is not finite");
}

}  // namespace landau
