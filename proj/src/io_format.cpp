#include "colecole/io_format.hpp"

#include "colecole/errors.hpp"

#include <charconv>

namespace colecole {

std::string fmt_num(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_num(const std::string& token)
{
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw DomainError("cannot parse number '" + token + "'");
    }
    return value;
}

} // namespace colecole
