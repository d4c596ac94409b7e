#include "lagns/params.hpp"

#include <sstream>
#include <stdexcept>

namespace lagns {

void PhysParams::validate() const {
  if (n < 2) throw std::invalid_argument("dimension n must be >= 2");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(2.0 * mu + n * lambda > 0.0))
    throw std::invalid_argument("admissibility requires 2*mu + n*lambda > 0");
  if (!(R > 0.0) || !(cv > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument("R, cv and kappa must be positive");
}

std::string PhysParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "n=" << n << " mu=" << mu << " lambda=" << lambda << " R=" << R << " cv=" << cv
     << " kappa=" << kappa;
  return os.str();
}

}  // namespace lagns
