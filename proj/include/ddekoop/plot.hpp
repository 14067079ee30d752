#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddekoop/harness.hpp"

namespace ddekoop {

/// mu against t on a log axis, one polyline per curve with its min/max band.
void write_curves_svg(const std::string& path, const std::vector<ErrorCurve>& curves,
                      const std::string& title);

/// True (solid) and predicted (dashed) current value per component, from a
/// compare_current_value table.
void write_current_value_svg(const std::string& path, const Eigen::MatrixXd& table,
                             const std::string& title);

}  // namespace ddekoop
