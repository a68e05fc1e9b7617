#include "sparsemap/cgra.hpp"

#include "sparsemap/util.hpp"

namespace sparsemap {

bool CgraConfig::valid(std::string* why) const {
  auto bad = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (rows < 1 || cols < 1) return bad("PEA needs at least one row and one column");
  if (lrf_capacity < 0 || grf_capacity < 0) return bad("register file capacity must be >= 0");
  if (grf_write_ports < 1 || grf_read_ports < 1) return bad("GRF needs at least one port each way");
  return true;
}

Tec Tec::build(const CgraConfig& cfg, int ii) {
  Tec t;
  t.cfg = cfg;
  t.ii = ii < 1 ? 1 : ii;
  return t;
}

std::string Ratio::str() const {
  if (den == 1) return std::to_string(num);
  // round to two decimals, then strip trailing zeros
  long long scaled = (200 * num / den + (num >= 0 ? 1 : -1)) / 2;  // round half away from zero
  long long ip = scaled / 100;
  long long fp = scaled % 100;
  if (fp < 0) fp = -fp;
  if (fp == 0) return std::to_string(ip);
  std::string s = std::to_string(ip) + ".";
  s += char('0' + fp / 10);
  if (fp % 10) s += char('0' + fp % 10);
  return s;
}

}  // namespace sparsemap
