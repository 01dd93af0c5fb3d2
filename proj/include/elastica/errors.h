#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace elastica {

// Base of every error the library throws. exit_code() is the CLI contract:
// 2 validation, 3 numerical/degeneracy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const = 0;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::uint64_t byte_offset)
      : ValidationError(what + " (at byte " + std::to_string(byte_offset) + ")"), offset_(byte_offset) {}
  std::uint64_t byte_offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Frames of a path (or the operands of an operation) disagree in grid shape.
class NonUniformGrid : public ValidationError {
 public:
  NonUniformGrid(const std::string& what, int frame) : ValidationError(what), frame_(frame) {}
  int frame() const { return frame_; }

 private:
  int frame_;
};

// EG - F^2 collapsed at an interior node: the discrete surface is not immersed.
class DegenerateMetric : public NumericalError {
 public:
  DegenerateMetric(int row, int col, int frame = -1)
      : NumericalError(describe(row, col, frame)), row_(row), col_(col), frame_(frame) {}

  int row() const { return row_; }
  int col() const { return col_; }
  int frame() const { return frame_; }

  DegenerateMetric in_frame(int frame) const { return DegenerateMetric(row_, col_, frame); }

 private:
  static std::string describe(int row, int col, int frame) {
    std::string s = "degenerate metric at row " + std::to_string(row) + ", column " + std::to_string(col);
    if (frame >= 0) s += " of frame " + std::to_string(frame);
    return s;
  }
  int row_, col_, frame_;
};

class SingularFit : public NumericalError {
 public:
  SingularFit(int row, int col, double condition)
      : NumericalError("ill-conditioned quadratic fit at row " + std::to_string(row) + ", column " +
                       std::to_string(col) + " (condition " + std::to_string(condition) + ")"),
        row_(row), col_(col) {}
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_, col_;
};

class ZeroVolume : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotTriaxial : public NumericalError {
 public:
  NotTriaxial(const std::string& what, std::array<double, 2> gaps) : NumericalError(what), gaps_(gaps) {}
  const std::array<double, 2>& gaps() const { return gaps_; }

 private:
  std::array<double, 2> gaps_;
};

class ImmersionLost : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace elastica
