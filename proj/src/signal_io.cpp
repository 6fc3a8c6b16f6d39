#include "flw/signal_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace flw {

static_assert(std::endian::native == std::endian::little, "binary signal format assumes little-endian host");

nlohmann::json signal_to_json(const Signal& f) {
  std::vector<double> re(f.values.size()), im(f.values.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = f.values[i].real();
    im[i] = f.values[i].imag();
  }
  return {{"d", f.grid.d}, {"n", f.grid.n}, {"re", re}, {"im", im}};
}

Signal signal_from_json(const nlohmann::json& j) {
  TorusGrid g = TorusGrid::make(j.at("d").get<int>(), j.at("n").get<int>());
  auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                            : std::vector<double>(re.size(), 0.0);
  if (re.size() != g.size() || im.size() != g.size()) throw Error("signal length does not match grid");
  Signal f = Signal::zeros(g);
  for (std::size_t i = 0; i < re.size(); ++i) f.values[i] = cplx(re[i], im[i]);
  f.check();
  return f;
}

std::string signal_to_binary(const Signal& f) {
  std::string out("FLW1");
  std::uint32_t hdr[2] = {static_cast<std::uint32_t>(f.grid.d), static_cast<std::uint32_t>(f.grid.n)};
  out.append(reinterpret_cast<const char*>(hdr), sizeof hdr);
  out.append(reinterpret_cast<const char*>(f.values.data()), f.values.size() * sizeof(cplx));
  return out;
}

Signal signal_from_binary(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "FLW1") != 0) throw Error("not an FLW1 signal");
  std::uint32_t hdr[2];
  std::memcpy(hdr, bytes.data() + 4, sizeof hdr);
  TorusGrid g = TorusGrid::make(static_cast<int>(hdr[0]), static_cast<int>(hdr[1]));
  if (bytes.size() != 12 + g.size() * sizeof(cplx)) throw Error("FLW1 payload length mismatch");
  Signal f = Signal::zeros(g);
  std::memcpy(f.values.data(), bytes.data() + 12, g.size() * sizeof(cplx));
  f.check();
  return f;
}

Signal load_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.rfind("FLW1", 0) == 0) return signal_from_binary(bytes);
  return signal_from_json(nlohmann::json::parse(bytes));
}

void save_signal(const Signal& f, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (binary)
    out << signal_to_binary(f);
  else
    out << signal_to_json(f).dump() << "\n";
}

}  // namespace flw
