#include <sgphs/errors.h>

#include <fmt/format.h>

namespace sgphs {

ParseError::ParseError(const std::string &message, int line, int column)
    : Error(fmt::format("line {}, column {}: {}", line, column, message)), line_(line), column_(column) {}

VersionMismatchError::VersionMismatchError(int found, int expected)
    : Error(fmt::format("checkpoint format version {} is not supported (expected version {})", found, expected)),
      found_(found),
      expected_(expected) {}

}  // namespace sgphs
