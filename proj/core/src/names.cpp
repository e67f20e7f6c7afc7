#include "ergodograph/names.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "ergodograph/errors.hpp"

namespace ergodograph {

namespace {

std::string padded(std::uint64_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(digits.begin(), static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return digits;
}

}  // namespace

std::string VertexNames::Segment::at(std::uint64_t k) const {
  if (!ranged) return names[k];
  return prefix + padded(first + k, width);
}

VertexNames::Builder& VertexNames::Builder::add(std::string name) {
  items_.push_back({false, std::move(name), {}});
  return *this;
}

VertexNames::Builder& VertexNames::Builder::add_range(std::string prefix, std::uint64_t first,
                                                      std::uint64_t count, int width) {
  if (count == 0) return *this;
  if (static_cast<int>(std::to_string(first + count - 1).size()) > width) {
    throw ValidationError("vertex range " + prefix + "* does not fit in " + std::to_string(width) +
                          " digits");
  }
  items_.push_back({true, {}, {std::move(prefix), first, count, width}});
  return *this;
}

VertexNames VertexNames::Builder::finish() && {
  VertexNames out;
  std::uint64_t total = 0;
  for (auto& item : items_) {
    if (item.ranged) {
      Segment seg;
      seg.ranged = true;
      seg.prefix = std::move(item.range.prefix);
      seg.first = item.range.first;
      seg.count = item.range.count;
      seg.width = item.range.width;
      out.segments_.push_back(std::move(seg));
    } else if (!out.segments_.empty() && !out.segments_.back().ranged) {
      out.segments_.back().names.push_back(std::move(item.name));
      ++out.segments_.back().count;
    } else {
      Segment seg;
      seg.names.push_back(std::move(item.name));
      seg.count = 1;
      out.segments_.push_back(std::move(seg));
    }
  }
  std::string previous;
  bool have_previous = false;
  for (auto& seg : out.segments_) {
    seg.offset = static_cast<VertexId>(total);
    total += seg.count;
    if (total > std::numeric_limits<VertexId>::max()) {
      throw ValidationError("too many vertices for 32-bit vertex ids");
    }
    if (!seg.ranged) {
      for (const auto& name : seg.names) {
        if (have_previous && !(previous < name)) {
          throw ValidationError("vertex identifiers not strictly increasing at '" + name + "'");
        }
        previous = name;
        have_previous = true;
      }
    } else {
      const std::string front = seg.front();
      if (have_previous && !(previous < front)) {
        throw ValidationError("vertex identifiers not strictly increasing at '" + front + "'");
      }
      previous = seg.back();
      have_previous = true;
    }
  }
  out.size_ = static_cast<std::size_t>(total);
  return out;
}

VertexNames VertexNames::from_names(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  if (auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end()) {
    throw ValidationError("duplicate vertex '" + *dup + "'");
  }
  for (const auto& name : names) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw ValidationError("vertex identifiers must be non-empty and whitespace-free");
    }
  }
  VertexNames out;
  if (!names.empty()) {
    Segment seg;
    seg.count = names.size();
    seg.names = std::move(names);
    out.size_ = seg.count;
    out.segments_.push_back(std::move(seg));
  }
  return out;
}

const VertexNames::Segment& VertexNames::segment_of(VertexId v) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), v,
                             [](VertexId x, const Segment& s) { return x < s.offset; });
  return *std::prev(it);
}

std::string VertexNames::operator[](VertexId v) const {
  const Segment& seg = segment_of(v);
  return seg.at(v - seg.offset);
}

std::optional<VertexId> VertexNames::find(std::string_view name) const {
  // Last segment whose first name is <= name.
  std::size_t lo = 0;
  std::size_t hi = segments_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (segments_[mid].front() <= name) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == 0) return std::nullopt;
  const Segment& seg = segments_[lo - 1];
  if (!seg.ranged) {
    auto it = std::lower_bound(seg.names.begin(), seg.names.end(), name);
    if (it == seg.names.end() || *it != name) return std::nullopt;
    return seg.offset + static_cast<VertexId>(it - seg.names.begin());
  }
  if (name.size() != seg.prefix.size() + static_cast<std::size_t>(seg.width) ||
      name.substr(0, seg.prefix.size()) != seg.prefix) {
    return std::nullopt;
  }
  std::string_view digits = name.substr(seg.prefix.size());
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  if (value < seg.first || value - seg.first >= seg.count) return std::nullopt;
  return seg.offset + static_cast<VertexId>(value - seg.first);
}

bool operator==(const VertexNames& a, const VertexNames& b) {
  if (a.size_ != b.size_) return false;
  if (a.segments_.size() == b.segments_.size()) {
    bool same_layout = true;
    for (std::size_t i = 0; i < a.segments_.size() && same_layout; ++i) {
      const auto& x = a.segments_[i];
      const auto& y = b.segments_[i];
      same_layout = x.ranged == y.ranged && x.count == y.count && x.names == y.names &&
                    x.prefix == y.prefix && x.first == y.first && x.width == y.width;
    }
    if (same_layout) return true;
  }
  for (VertexId v = 0; v < a.size_; ++v) {
    if (a[v] != b[v]) return false;
  }
  return true;
}

}  // namespace ergodograph
