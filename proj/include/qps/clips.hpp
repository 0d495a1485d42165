#pragma once

#include <compare>
#include <string>

#include "qps/error.hpp"

namespace qps {

enum class ClipKind { Percept, Action };

/// A node of the episodic memory graph: percept i or action k.
struct Clip {
  ClipKind kind = ClipKind::Percept;
  int index = 0;

  static Clip percept(int i) { return Clip{ClipKind::Percept, i}; }
  static Clip action(int k) { return Clip{ClipKind::Action, k}; }

  bool is_percept() const { return kind == ClipKind::Percept; }
  bool is_action() const { return kind == ClipKind::Action; }

  auto operator<=>(const Clip&) const = default;

  std::string label() const {
    return (is_percept() ? "p" : "a") + std::to_string(index);
  }

  /// Inverse of label(): accepts "p<digits>" and "a<digits>".
  static Clip from_label(const std::string& text);
};

}  // namespace qps
