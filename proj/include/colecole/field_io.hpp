#ifndef COLECOLE_FIELD_IO_HPP
#define COLECOLE_FIELD_IO_HPP

#include "colecole/dg.hpp"

#include <iosfwd>
#include <string>

namespace colecole {

/// "# cells=M degree=k x_minus=a x_plus=b", then one line of k+1 modal coefficients per cell.
void write_field(std::ostream& os, const DgField& field);
DgField read_field(std::istream& is);

/// "x,<name>" sampled at `perCell` equispaced points inside every cell.
void write_field_samples(std::ostream& os, const DgField& field, const std::string& name, int perCell = 4);

} // namespace colecole

#endif // COLECOLE_FIELD_IO_HPP
