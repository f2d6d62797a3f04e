#pragma once

#include <string>

namespace gepsvm {

/// Writes via a temp file in the same directory plus rename, so interrupted
/// runs never leave partial output behind.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace gepsvm
