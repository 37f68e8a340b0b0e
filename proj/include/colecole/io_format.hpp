#ifndef COLECOLE_IO_FORMAT_HPP
#define COLECOLE_IO_FORMAT_HPP

#include <string>

namespace colecole {

/// Shortest decimal string that parses back to the same double.
std::string fmt_num(double x);
/// Inverse of fmt_num; throws DomainError on trailing garbage.
double parse_num(const std::string& token);

} // namespace colecole

#endif // COLECOLE_IO_FORMAT_HPP
