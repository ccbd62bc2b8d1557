#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wiretap {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Channel is rank deficient (smallest singular value below 1e-10 of the largest).
class DegenerateChannelError : public Error {
  public:
    using Error::Error;
};

/// Singular value gaps too small for the second-order expansion.
class IllConditionedError : public Error {
  public:
    using Error::Error;
};

/// Perturbation analysis requires a fat or square channel (rows <= cols).
class OrientationError : public Error {
  public:
    using Error::Error;
};

/// A closed-form prediction left the region where it is meaningful.
class ValidityRangeError : public Error {
  public:
    using Error::Error;
};

class NumericError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace wiretap
