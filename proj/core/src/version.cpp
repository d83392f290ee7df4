#include "shapedecomp/version.hpp"

#include <gmp.h>
#include <gsl/gsl_version.h>

#include <Eigen/Core>

namespace shapedecomp {

std::string version() { return SHAPEDECOMP_VERSION; }

std::vector<std::pair<std::string, std::string>> dependency_versions() {
  return {{"gmp", gmp_version},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"gsl", GSL_VERSION}};
}

}  // namespace shapedecomp
