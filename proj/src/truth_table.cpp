#include "sbn/truth_table.hpp"

#include <fstream>

#include "sbn/errors.hpp"

namespace sbn {

void TruthTable::validate() const {
  if (n < 1 || n > kMaxExactBits)
    throw CapacityError("table input width " + std::to_string(n) + " outside exact mode [1, " +
                        std::to_string(kMaxExactBits) + "]");
  if (m < 1 || m > kMaxExactBits) throw CapacityError("table output width outside [1, 16]");
  if (static_cast<int>(entries.size()) != domain())
    throw ShapeError("table must hold exactly 2^n entries");
  const std::uint32_t limit = 1u << m;
  for (std::uint32_t w : entries)
    if (w >= limit) throw ShapeError("table entry exceeds 2^m");
}

TruthTable truth_table(const std::function<std::uint32_t(std::uint32_t)>& f, int n, int m) {
  if (n < 1 || n > kMaxExactBits)
    throw CapacityError("exact enumeration limited to " + std::to_string(kMaxExactBits) +
                        " input bits, got " + std::to_string(n));
  TruthTable t;
  t.n = n;
  t.m = m;
  t.entries.resize(std::size_t{1} << n);
  const std::uint32_t mask = m == 32 ? ~0u : (1u << m) - 1u;
  for (std::uint32_t x = 0; x < t.entries.size(); ++x) t.entries[x] = f(x) & mask;
  t.validate();
  return t;
}

TruthTable truth_table(const SbnNetwork& net) {
  return truth_table([&net](std::uint32_t x) { return io_map(net, x); }, net.n_in(), net.n_out());
}

std::uint64_t table_digest(const TruthTable& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto absorb = [&h](std::uint32_t w) {
    for (int i = 0; i < 4; ++i) {
      h ^= (w >> (8 * i)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  };
  absorb(static_cast<std::uint32_t>(t.n));
  absorb(static_cast<std::uint32_t>(t.m));
  for (std::uint32_t w : t.entries) absorb(w);
  return h;
}

void save_table(const TruthTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::uint32_t header[2] = {static_cast<std::uint32_t>(t.n), static_cast<std::uint32_t>(t.m)};
  auto put32 = [&out](std::uint32_t w) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((w >> (8 * i)) & 0xFFu);
    out.write(b, 4);
  };
  put32(header[0]);
  put32(header[1]);
  for (std::uint32_t w : t.entries) put32(w);
  if (!out) throw IoError("failed writing '" + path + "'");
}

TruthTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  auto get32 = [&in, &path]() {
    char b[4];
    if (!in.read(b, 4)) throw IoError("truncated table file '" + path + "'");
    std::uint32_t w = 0;
    for (int i = 0; i < 4; ++i) w |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return w;
  };
  TruthTable t;
  t.n = static_cast<int>(get32());
  t.m = static_cast<int>(get32());
  if (t.n < 1 || t.n > kMaxExactBits) throw IoError("table file has invalid width header");
  t.entries.resize(std::size_t{1} << t.n);
  for (auto& w : t.entries) w = get32();
  t.validate();
  return t;
}

} // namespace sbn
