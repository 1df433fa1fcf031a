// SPDX-License-Identifier: Apache-2.0

#include "plfront/error.hpp"

namespace plf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Instantiation: return "instantiation_error";
    case ErrorKind::Type: return "type_error";
    case ErrorKind::Domain: return "domain_error";
    case ErrorKind::Permission: return "permission_error";
    case ErrorKind::Existence: return "existence_error";
    case ErrorKind::Representation: return "representation_error";
    case ErrorKind::Evaluation: return "evaluation_error";
    case ErrorKind::Resource: return "resource_error";
  }
  return "system_error";
}

namespace {

std::string render(ErrorKind kind, const std::string& detail) {
  std::string out(to_string(kind));
  if (!detail.empty()) {
    out += "(" + detail + ")";
  }
  return out;
}

}  // namespace

PrologError::PrologError(ErrorKind kind, std::string detail)
    : std::runtime_error(render(kind, detail)), kind_(kind), detail_(std::move(detail)) {}

std::string PrologError::formal() const { return render(kind_, detail_); }

}  // namespace plf
