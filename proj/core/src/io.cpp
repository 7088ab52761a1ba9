#include "gcsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcsim/errors.hpp"

namespace gcsim {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  return out;
}

std::string read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  return line;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

Rational parse_rational(const std::string& text, const std::string& where) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ParseError(where + ": bad rational '" + text + "'");
  }
}

std::string rational_text(const Rational& r) { return r.str(); }

}  // namespace

Trace read_trace(const std::string& path) {
  auto in = open_in(path);
  if (read_header(in, path) != "#gc-trace v1")
    throw ParseError(path + ": expected header '#gc-trace v1'");
  Trace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    trace.accesses.push_back(parse_item(line));
  }
  return trace;
}

void write_trace(const std::string& path, const Trace& trace) {
  auto out = open_out(path);
  out << "#gc-trace v1\n";
  for (const auto& a : trace.accesses) out << to_string(a) << "\n";
}

BlockMap read_block_map(const std::string& path) {
  auto in = open_in(path);
  std::string header = read_header(in, path);
  BlockMap map;
  if (std::sscanf(header.c_str(), "#gc-blocks v1 B=%u", &map.max_block_size) !=
      1)
    throw ParseError(path + ": expected header '#gc-blocks v1 B=<int>'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto toks = split_ws(line);
    if (toks.size() != 2)
      throw ParseError(path + ": expected 'blockId itemCount', got '" + line +
                       "'");
    try {
      map.blocks[static_cast<std::uint32_t>(std::stoul(toks[0]))] =
          static_cast<std::uint32_t>(std::stoul(toks[1]));
    } catch (const std::exception&) {
      throw ParseError(path + ": bad block line '" + line + "'");
    }
  }
  auto violations = validate_block_map(map);
  if (!violations.empty()) throw ParseError(path + ": " + violations.front());
  return map;
}

void write_block_map(const std::string& path, const BlockMap& map) {
  auto out = open_out(path);
  out << "#gc-blocks v1 B=" << map.max_block_size << "\n";
  for (const auto& [id, count] : map.blocks) out << id << " " << count << "\n";
}

void print_schedule(std::ostream& out, const OfflineSchedule& schedule) {
  for (const auto& op : schedule.ops) {
    out << "pos " << op.at_access << " load";
    for (const auto& item : op.loaded) out << " " << to_string(item);
    out << " evict";
    for (const auto& item : op.evicted) out << " " << to_string(item);
    out << "\n";
  }
}

OfflineSchedule read_schedule(const std::string& path, std::size_t* h_out) {
  auto in = open_in(path);
  std::string header = read_header(in, path);
  unsigned long long h = 0;
  if (std::sscanf(header.c_str(), "#gc-schedule v1 h=%llu", &h) != 1)
    throw ParseError(path + ": expected header '#gc-schedule v1 h=<int>'");
  if (h_out) *h_out = h;
  OfflineSchedule schedule;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto toks = split_ws(line);
    if (toks.size() < 4 || toks[0] != "pos" || toks[2] != "load")
      throw ParseError(path + ": bad schedule line '" + line + "'");
    LoadOp op;
    try {
      op.at_access = std::stoull(toks[1]);
    } catch (const std::exception&) {
      throw ParseError(path + ": bad position in '" + line + "'");
    }
    std::size_t i = 3;
    for (; i < toks.size() && toks[i] != "evict"; ++i)
      op.loaded.push_back(parse_item(toks[i]));
    if (i == toks.size())
      throw ParseError(path + ": schedule line missing 'evict'");
    for (++i; i < toks.size(); ++i) op.evicted.push_back(parse_item(toks[i]));
    schedule.ops.push_back(std::move(op));
  }
  schedule.claimed_cost = schedule.ops.size();
  return schedule;
}

void write_schedule(const std::string& path, const OfflineSchedule& schedule,
                    std::size_t h) {
  auto out = open_out(path);
  out << "#gc-schedule v1 h=" << h << "\n";
  print_schedule(out, schedule);
}

VarSizeInstance read_varsize(const std::string& path) {
  auto in = open_in(path);
  std::string header = read_header(in, path);
  if (header.rfind("#varsize v1 cap=", 0) != 0)
    throw ParseError(path + ": expected header '#varsize v1 cap=<rational>'");
  VarSizeInstance inst;
  inst.capacity = parse_rational(header.substr(16), path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto toks = split_ws(line);
    if (toks.size() == 3 && toks[0] == "size")
      inst.sizes[toks[1]] = parse_rational(toks[2], path);
    else if (toks.size() == 2 && toks[0] == "access")
      inst.accesses.push_back(toks[1]);
    else
      throw ParseError(path + ": bad varsize line '" + line + "'");
  }
  return inst;
}

void write_varsize(const std::string& path, const VarSizeInstance& inst) {
  auto out = open_out(path);
  out << "#varsize v1 cap=" << rational_text(inst.capacity) << "\n";
  for (const auto& [name, size] : inst.sizes)
    out << "size " << name << " " << rational_text(size) << "\n";
  for (const auto& name : inst.accesses) out << "access " << name << "\n";
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_to_string(const CsvTable& table) {
  std::ostringstream out;
  for (const auto& c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << table.header[i] << (i + 1 == table.header.size() ? "\n" : ",");
  for (const auto& row : table.rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 == row.size() ? "\n" : ",");
  return out.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
  auto out = open_out(path);
  out << csv_to_string(table);
}

}  // namespace gcsim
