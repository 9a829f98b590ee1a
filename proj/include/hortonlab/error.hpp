#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hortonlab {

/// Typed error codes surfaced by every operation in the library.
enum class errc {
  empty_tree,
  node_not_found,
  out_of_domain,
  no_root_in_domain,
  negative_param,
  nonpositive_k,
  overflow,
  noninteger_mean,
  tree_too_large,
  syntax_error,
  not_full_binary,
  bad_config,
  io_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::empty_tree: return "EMPTY_TREE";
    case errc::node_not_found: return "NODE_NOT_FOUND";
    case errc::out_of_domain: return "OUT_OF_DOMAIN";
    case errc::no_root_in_domain: return "NO_ROOT_IN_DOMAIN";
    case errc::negative_param: return "NEGATIVE_PARAM";
    case errc::nonpositive_k: return "NONPOSITIVE_K";
    case errc::overflow: return "OVERFLOW";
    case errc::noninteger_mean: return "NONINTEGER_MEAN";
    case errc::tree_too_large: return "TREE_TOO_LARGE";
    case errc::syntax_error: return "SYNTAX_ERROR";
    case errc::not_full_binary: return "NOT_FULL_BINARY";
    case errc::bad_config: return "BAD_CONFIG";
    case errc::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

  /// Input/configuration problems (CLI exit code 1) versus failures that
  /// occur while a well-formed computation is running (exit code 2).
  bool is_validation() const noexcept {
    switch (code_) {
      case errc::overflow:
      case errc::tree_too_large:
      case errc::no_root_in_domain:
      case errc::io_error:
        return false;
      default:
        return true;
    }
  }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hortonlab
