#include "irsim/types.hpp"

#include <algorithm>
#include <ostream>

namespace irsim {

std::ostream& operator<<(std::ostream& os, AsId id) { return os << id.value; }

std::string to_string(AsId id) { return std::to_string(id.value); }

std::string to_string(const Path& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i != 0) out += ' ';
    out += to_string(path[i]);
  }
  return out;
}

std::string to_string(LinkKey link) {
  return to_string(link.lo) + "-" + to_string(link.hi);
}

bool path_contains(const Path& path, AsId as) {
  return std::find(path.begin(), path.end(), as) != path.end();
}

bool path_contains_link(const Path& path, LinkKey link) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (LinkKey(path[i], path[i + 1]) == link) return true;
  }
  return false;
}

std::size_t common_suffix(const Path& a, const Path& b) {
  std::size_t n = 0;
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  while (ia != a.rend() && ib != b.rend() && *ia == *ib) {
    ++n;
    ++ia;
    ++ib;
  }
  return n;
}

}  // namespace irsim
