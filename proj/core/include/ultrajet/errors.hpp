#ifndef ULTRAJET_ERRORS_HPP
#define ULTRAJET_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultrajet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ULTRAJET_SIMPLE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  };

ULTRAJET_SIMPLE_ERROR(InvalidSequence)
ULTRAJET_SIMPLE_ERROR(PreconditionFailed)
ULTRAJET_SIMPLE_ERROR(EmptyInput)
ULTRAJET_SIMPLE_ERROR(DimensionMismatch)
ULTRAJET_SIMPLE_ERROR(OrderMismatch)
ULTRAJET_SIMPLE_ERROR(BasePointMismatch)
ULTRAJET_SIMPLE_ERROR(HorizonExceeded)
ULTRAJET_SIMPLE_ERROR(SingularDerivative)
ULTRAJET_SIMPLE_ERROR(ArityError)
ULTRAJET_SIMPLE_ERROR(EvaluationError)
ULTRAJET_SIMPLE_ERROR(InvalidGrid)
ULTRAJET_SIMPLE_ERROR(InvalidClassSpec)
ULTRAJET_SIMPLE_ERROR(UnsupportedIndices)
ULTRAJET_SIMPLE_ERROR(QuadratureBoxTooSmall)
ULTRAJET_SIMPLE_ERROR(EmptyRepresentation)
ULTRAJET_SIMPLE_ERROR(SplitMismatch)
ULTRAJET_SIMPLE_ERROR(NotADiffeo)
ULTRAJET_SIMPLE_ERROR(NoConvergence)
ULTRAJET_SIMPLE_ERROR(SingularMatrix)
ULTRAJET_SIMPLE_ERROR(DivergentAtHorizon)
ULTRAJET_SIMPLE_ERROR(IncompatibleWeightSequences)

#undef ULTRAJET_SIMPLE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Raised when no index pair satisfying the growth condition exists below the search horizon.
class SearchExhausted : public Error {
 public:
  SearchExhausted(int n, double best_log_ratio, double needed_log_ratio);
  int n() const noexcept { return n_; }
  double best_log_ratio() const noexcept { return best_; }
  double needed_log_ratio() const noexcept { return needed_; }

 private:
  int n_;
  double best_;
  double needed_;
};

class ContractionFailure : public Error {
 public:
  ContractionFailure(int order, double factor);
  int order() const noexcept { return order_; }
  double factor() const noexcept { return factor_; }

 private:
  int order_;
  double factor_;
};

}  // namespace ultrajet

#endif
