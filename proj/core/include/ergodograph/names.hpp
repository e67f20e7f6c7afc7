#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ergodograph {

using VertexId = std::uint32_t;

/// Lexicographically ordered table of vertex identifiers.
///
/// The table is a sequence of segments. An explicit segment stores its
/// names; a ranged segment stores `prefix` and a numeric range and
/// produces `prefix + zero-padded(i)` on demand, which keeps towers with
/// tens of millions of interior path vertices affordable. Segments must
/// be strictly increasing, so index order and name order coincide.
class VertexNames {
 public:
  class Builder {
   public:
    Builder& add(std::string name);
    /// Adds `count` names `prefix + pad(first + k, width)`.
    Builder& add_range(std::string prefix, std::uint64_t first, std::uint64_t count, int width);
    /// Throws ValidationError if the names are not strictly increasing.
    VertexNames finish() &&;

   private:
    struct Range {
      std::string prefix;
      std::uint64_t first;
      std::uint64_t count;
      int width;
    };
    struct Item {
      bool ranged;
      std::string name;
      Range range;
    };
    std::vector<Item> items_;
  };

  VertexNames() = default;

  /// Sorts and checks uniqueness; throws ValidationError on duplicates.
  static VertexNames from_names(std::vector<std::string> names);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::string operator[](VertexId v) const;
  std::optional<VertexId> find(std::string_view name) const;

  friend bool operator==(const VertexNames& a, const VertexNames& b);

 private:
  struct Segment {
    VertexId offset = 0;
    std::uint64_t count = 0;
    bool ranged = false;
    std::vector<std::string> names;  // explicit segments
    std::string prefix;              // ranged segments
    std::uint64_t first = 0;
    int width = 0;

    std::string at(std::uint64_t k) const;
    std::string front() const { return at(0); }
    std::string back() const { return at(count - 1); }
  };

  const Segment& segment_of(VertexId v) const;

  std::vector<Segment> segments_;
  std::size_t size_ = 0;
};

}  // namespace ergodograph
