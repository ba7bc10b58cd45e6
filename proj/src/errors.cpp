#include "hardylab/errors.hpp"

#include <sstream>

namespace hardylab {

namespace {
std::string supercritical_message(double lambda, double critical) {
  std::ostringstream os;
  os.precision(17);
  os << "coupling lambda=" << lambda << " is not subcritical: lambda* = " << critical;
  return os.str();
}
}  // namespace

SupercriticalCoupling::SupercriticalCoupling(double lambda, double critical)
    : std::domain_error(supercritical_message(lambda, critical)), lambda_(lambda), critical_(critical) {}

}  // namespace hardylab
