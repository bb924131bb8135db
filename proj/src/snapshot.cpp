#include "mikado/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mikado
{

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

namespace
{

void put_i32(std::ofstream &out, std::int32_t v) { out.write(reinterpret_cast<const char *>(&v), 4); }

std::int32_t get_i32(std::ifstream &in)
{
  std::int32_t v = 0;
  in.read(reinterpret_cast<char *>(&v), 4);
  return v;
}

}  // namespace

void write_snapshot(const std::string &path, const RealField &f)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("snapshot: cannot open " + path + " for writing");
  }
  out.write("MKL1", 4);
  put_i32(out, f.grid().n());
  put_i32(out, static_cast<std::int32_t>(f.rank()));
  put_i32(out, f.ncomp());
  for (int c = 0; c < f.ncomp(); ++c)
  {
    out.write(reinterpret_cast<const char *>(f.comp(c)),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  if (!out)
  {
    throw std::runtime_error("snapshot: write failed for " + path);
  }
}

RealField read_snapshot(const std::string &path, double dealias_fraction)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw std::runtime_error("snapshot: cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "MKL1", 4) != 0)
  {
    throw std::runtime_error("snapshot: bad magic in " + path);
  }
  const int n = get_i32(in);
  const int rank = get_i32(in);
  const int ncomp = get_i32(in);
  if (rank != 1 && rank != 3 && rank != 6)
  {
    throw std::runtime_error("snapshot: bad rank in " + path);
  }
  if (ncomp != rank)
  {
    throw std::runtime_error("snapshot: component count does not match rank in " + path);
  }
  RealField f(make_grid(n, dealias_fraction), static_cast<Rank>(rank));
  for (int c = 0; c < ncomp; ++c)
  {
    in.read(reinterpret_cast<char *>(f.comp(c)), static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  if (!in)
  {
    throw std::runtime_error("snapshot: truncated file " + path);
  }
  return f;
}

}  // namespace mikado
