#pragma once

#include <string>
#include <vector>

#include "vterm/model.h"

namespace vterm {

enum class IssueKind {
  kDanglingStopReference,
  kLineWithoutItinerary,
  kUnresolvableLine,
  kVehicleWithoutFixes,
};

std::string_view to_string(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string subject;  // line code, vehicle id, ...
  std::string detail;

  friend bool operator==(const ValidationIssue&,
                         const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  std::size_t count(IssueKind kind) const;
};

/// Report-only check of cross-file references. Never throws, never mutates.
ValidationReport validate_dataset(const Dataset& dataset);

}  // namespace vterm
