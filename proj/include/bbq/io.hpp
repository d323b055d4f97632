// io.hpp: stable number formatting and file output.
#pragma once

#include <string>

namespace bbq::io {

/// 12 significant digits ("%.12g"); "nan", "inf", "-inf" for non-finite values.
std::string fmt(double value);

/// Writes `content` to `path` in binary mode so line endings are exactly '\n'.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace bbq::io
