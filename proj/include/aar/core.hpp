#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace aar {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;
using Mat26 = Eigen::Matrix<double, 2, 6>;
using Mat16 = Eigen::Matrix<double, 1, 6>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class ErrorKind {
    Domain,
    BehindCamera,
    Diverged,
    Unstabilizable,
    SolverFailure,
    SynthesisFailure,
    Config,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind k) noexcept;

}  // namespace aar
