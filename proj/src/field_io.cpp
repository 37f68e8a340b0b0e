#include "colecole/field_io.hpp"

#include "colecole/errors.hpp"
#include "colecole/io_format.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace colecole {

void write_field(std::ostream& os, const DgField& field)
{
    const Mesh1D& m = field.mesh();
    os << "# cells=" << m.cells() << " degree=" << field.degree() << " x_minus=" << fmt_num(m.xMinus())
       << " x_plus=" << fmt_num(m.xPlus()) << '\n';
    for (int j = 0; j < m.cells(); ++j) {
        for (int i = 0; i < field.modes(); ++i) {
            os << (i ? " " : "") << fmt_num(field(j, i));
        }
        os << '\n';
    }
}

DgField read_field(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
        throw DomainError("field file must start with a '# cells=.. degree=..' header");
    }
    int cells = -1;
    int degree = -1;
    double xMinus = 0.0;
    double xPlus = 0.0;
    std::istringstream header(line.substr(2));
    std::string item;
    while (header >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw DomainError("malformed header entry '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "cells") {
            cells = static_cast<int>(parse_num(val));
        } else if (key == "degree") {
            degree = static_cast<int>(parse_num(val));
        } else if (key == "x_minus") {
            xMinus = parse_num(val);
        } else if (key == "x_plus") {
            xPlus = parse_num(val);
        }
    }
    if (cells < 0 || degree < 0) {
        throw DomainError("field header lacks cells or degree");
    }
    DgField field(Mesh1D(xMinus, xPlus, cells), degree);
    for (int j = 0; j < cells; ++j) {
        for (int i = 0; i < field.modes(); ++i) {
            std::string token;
            if (!(is >> token)) {
                throw DomainError("field file ends early at cell " + std::to_string(j));
            }
            field(j, i) = parse_num(token);
        }
    }
    return field;
}

void write_field_samples(std::ostream& os, const DgField& field, const std::string& name, int perCell)
{
    const Mesh1D& m = field.mesh();
    os << "x," << name << '\n';
    for (int j = 0; j < m.cells(); ++j) {
        for (int q = 0; q < perCell; ++q) {
            const double xi = -1.0 + (2.0 * q + 1.0) / perCell;
            os << fmt_num(m.toPhysical(j, xi)) << ',' << fmt_num(field.evaluate(j, xi)) << '\n';
        }
    }
}

} // namespace colecole
