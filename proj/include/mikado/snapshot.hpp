#ifndef MIKADO_SNAPSHOT_HPP
#define MIKADO_SNAPSHOT_HPP

#include <string>

#include "mikado/field.hpp"

namespace mikado
{

// "MKL1", then n, rank, component count as int32 LE, then float64 LE samples (x fastest),
// one component after another.
void write_snapshot(const std::string &path, const RealField &f);
RealField read_snapshot(const std::string &path, double dealias_fraction = 2.0 / 3.0);

}  // namespace mikado

#endif  // MIKADO_SNAPSHOT_HPP
