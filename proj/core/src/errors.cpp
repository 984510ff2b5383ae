#include "ultrajet/errors.hpp"

#include <cstdio>

namespace ultrajet {

namespace {

std::string syntax_message(std::size_t offset, const std::vector<std::string>& expected,
                           const std::string& found) {
  std::string msg = "SyntaxError at offset " + std::to_string(offset) + ": expected ";
  if (expected.size() == 1) {
    msg += expected[0];
  } else {
    msg += "one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += ", ";
      msg += expected[i];
    }
    msg += "}";
  }
  msg += ", found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
  return msg;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(syntax_message(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

SearchExhausted::SearchExhausted(int n, double best_log_ratio, double needed_log_ratio)
    : Error("SearchExhausted: no admissible pair for n=" + std::to_string(n) +
            " (best log ratio " + fmt_double(best_log_ratio) + ", needed " + fmt_double(needed_log_ratio) + ")"),
      n_(n),
      best_(best_log_ratio),
      needed_(needed_log_ratio) {}

ContractionFailure::ContractionFailure(int order, double factor)
    : Error("ContractionFailure: contraction factor " + fmt_double(factor) + " >= 1 at order " +
            std::to_string(order)),
      order_(order),
      factor_(factor) {}

}  // namespace ultrajet
