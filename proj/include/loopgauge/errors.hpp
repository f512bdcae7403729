#pragma once

#include <stdexcept>
#include <string>

namespace loopgauge {

enum class ErrorCode {
  usage,
  dimension_mismatch,
  unphysical_state,
  rank_deficient_link,
  product_state_link,
  defective_link,
  branch_cut,
  singular_matrix,
  no_convergence,
  annihilating_operation,
  not_lorentz,
  pairing_failure,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error attached to a specific two-qubit link (qubit labels of the pair).
class LinkError : public Error {
 public:
  LinkError(ErrorCode code, int qa, int qb, const std::string& msg)
      : Error(code, msg + " [link (" + std::to_string(qa) + "," +
                         std::to_string(qb) + ")]"),
        qa_(qa),
        qb_(qb) {}
  int qubit_a() const noexcept { return qa_; }
  int qubit_b() const noexcept { return qb_; }

 private:
  int qa_, qb_;
};

class RankDeficientLink : public LinkError {
 public:
  RankDeficientLink(int qa, int qb, const std::string& msg)
      : LinkError(ErrorCode::rank_deficient_link, qa, qb, msg) {}
};

class ProductStateLink : public LinkError {
 public:
  ProductStateLink(int qa, int qb, const std::string& msg)
      : LinkError(ErrorCode::product_state_link, qa, qb, msg) {}
};

class DefectiveLink : public LinkError {
 public:
  DefectiveLink(int qa, int qb, const std::string& msg)
      : LinkError(ErrorCode::defective_link, qa, qb, msg) {}
};

}  // namespace loopgauge
