#include "lipasp/errors.hpp"

namespace lipasp {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

EquivalenceError::EquivalenceError(const std::string& what, double discrepancy)
    : Error(what), discrepancy_(discrepancy) {}

}  // namespace lipasp
