#pragma once

#include "matroid_er/etr.hpp"
#include "matroid_er/matroid.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace matroid_er {

/// Two declared lines would share two points, or a gadget forces two
/// distinct points to coincide.
class CoincidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Role { Zero, One, Inf, Variable, Helper };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Zero: return "zero";
    case Role::One: return "one";
    case Role::Inf: return "inf";
    case Role::Variable: return "var";
    case Role::Helper: return "helper";
  }
  return "?";
}

struct PointInfo {
  Role role = Role::Helper;
  std::string name;
  int var = -1;          // source variable for Role::Variable
  int gadget = -1;       // owning trace record for helpers
  std::string freedom;   // placement degrees of freedom, human readable
};

/// A projective coordinate system on a registered line: points playing
/// 0, 1 and infinity. Gadget helpers a, b of every frame live on line 1.
struct FrameInfo {
  int zero, one, inf, line;
};

/// Rank-3 matroid under construction, as a point registry plus line registry.
/// Line 0 is the measurement line and line 1 the line at infinity; they meet
/// only in the INF point (point 2).
class CompiledMatroid {
 public:
  static constexpr int kZero = 0, kOne = 1, kInf = 2;
  static constexpr int kEll = 0, kEllInf = 1;

  CompiledMatroid() {
    add_point({Role::Zero, "0", -1, -1, "fixed"});
    add_point({Role::One, "1", -1, -1, "fixed"});
    add_point({Role::Inf, "inf", -1, -1, "fixed"});
    lines_.push_back({});
    lines_.push_back({});
    add_to_line(kEll, kZero);
    add_to_line(kEll, kOne);
    add_to_line(kEll, kInf);
    add_to_line(kEllInf, kInf);
    frames_.push_back({kZero, kOne, kInf, kEll});
  }

  int add_point(PointInfo info) {
    points_.push_back(std::move(info));
    return static_cast<int>(points_.size()) - 1;
  }

  /// Adds p to an existing line; a pair already on another line is a conflict.
  void add_to_line(int line, int p) {
    auto& members = lines_.at(line);
    if (std::binary_search(members.begin(), members.end(), p)) return;
    for (int q : members) {
      auto it = pair_line_.find(key(p, q));
      if (it != pair_line_.end() && it->second != line)
        throw CoincidenceError("points " + label(p) + " and " + label(q) + " would lie on two declared lines (" +
                               std::to_string(it->second) + " and " + std::to_string(line) + ")");
    }
    for (int q : members) pair_line_[key(p, q)] = line;
    members.insert(std::upper_bound(members.begin(), members.end(), p), p);
  }

  /// Declares a new line through the given (pairwise distinct) points.
  int declare_line(const std::vector<int>& pts) {
    ElementSet s = canonical_set(pts);
    if (s.size() != pts.size())
      throw CoincidenceError("gadget line would contain a repeated point");
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (auto it = pair_line_.find(key(s[i], s[j])); it != pair_line_.end())
          throw CoincidenceError("points " + label(s[i]) + " and " + label(s[j]) + " already lie on line " +
                                 std::to_string(it->second));
    lines_.push_back({});
    int id = static_cast<int>(lines_.size()) - 1;
    for (int p : s) add_to_line(id, p);
    return id;
  }

  /// Line id containing both p and q, if declared.
  int line_of(int p, int q) const {
    auto it = pair_line_.find(key(p, q));
    return it == pair_line_.end() ? -1 : it->second;
  }
  bool on_line(int line, int p) const {
    const auto& m = lines_.at(line);
    return std::binary_search(m.begin(), m.end(), p);
  }

  int add_frame(FrameInfo f) {
    frames_.push_back(f);
    return static_cast<int>(frames_.size()) - 1;
  }

  /// Rebuilds a registry from serialized parts, re-checking every pair.
  static CompiledMatroid restore(std::vector<PointInfo> points, const std::vector<ElementSet>& lines,
                                 std::vector<FrameInfo> frames) {
    if (points.size() < 3 || lines.size() < 2 || frames.empty())
      throw InputError("registry needs the frame points, both distinguished lines and a frame");
    CompiledMatroid cm;
    cm.points_ = std::move(points);
    cm.lines_.assign(lines.size(), {});
    cm.pair_line_.clear();
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (int p : lines[i]) {
        if (p < 0 || p >= static_cast<int>(cm.points_.size())) throw InputError("line member out of range");
        cm.add_to_line(static_cast<int>(i), p);
      }
    for (const auto& f : frames)
      for (int p : {f.zero, f.one, f.inf})
        if (f.line < 0 || f.line >= static_cast<int>(cm.lines_.size()) || !cm.on_line(f.line, p))
          throw InputError("frame point is not on its frame line");
    cm.frames_ = std::move(frames);
    return cm;
  }

  const std::vector<PointInfo>& points() const { return points_; }
  PointInfo& point(int p) { return points_.at(p); }
  const std::vector<ElementSet>& lines() const { return lines_; }
  const std::vector<FrameInfo>& frames() const { return frames_; }
  std::size_t num_points() const { return points_.size(); }
  std::size_t num_lines() const { return lines_.size(); }

  std::string label(int p) const {
    const auto& pi = points_.at(p);
    switch (pi.role) {
      case Role::Zero: return "0";
      case Role::One: return "1";
      case Role::Inf: return "inf";
      case Role::Variable: return "var:" + pi.name;
      case Role::Helper: return "h:" + pi.name;
    }
    return std::to_string(p);
  }

  /// Declared lines with at least three points.
  LineSet line_set() const {
    LineSet ls{static_cast<int>(points_.size()), {}};
    for (const auto& l : lines_)
      if (l.size() >= 3) ls.lines.push_back(l);
    return ls;
  }

  Matroid matroid() const { return from_lines(line_set()); }

 private:
  static std::uint64_t key(int p, int q) {
    if (p > q) std::swap(p, q);
    return (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint32_t>(q);
  }

  std::vector<PointInfo> points_;
  std::vector<ElementSet> lines_;
  std::vector<FrameInfo> frames_;
  std::unordered_map<std::uint64_t, int> pair_line_;
};

}  // namespace matroid_er
