#include "irsim/speaker.hpp"

namespace irsim {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Bgp: return "bgp";
    case Protocol::Rbgp: return "rbgp";
    case Protocol::Miro: return "miro";
    case Protocol::Yamr: return "yamr";
    case Protocol::YamrHiding: return "yamr_hiding";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Miro, Protocol::Yamr,
                     Protocol::YamrHiding}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

}  // namespace irsim
