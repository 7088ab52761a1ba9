#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gcsim/oracle.hpp"
#include "gcsim/types.hpp"

namespace gcsim {

// Line-oriented text formats, all with a mandatory versioned header:
//   trace:     "#gc-trace v1"            then one "block.index" per line
//   block map: "#gc-blocks v1 B=<int>"   then "blockId itemCount" lines
//   schedule:  "#gc-schedule v1 h=<int>" then "pos <p> load <items...>
//              evict <items...>" lines
//   varsize:   "#varsize v1 cap=<rational>" then "size <item> <rational>"
//              and "access <item>" lines

Trace read_trace(const std::string& path);
void write_trace(const std::string& path, const Trace& trace);

BlockMap read_block_map(const std::string& path);
void write_block_map(const std::string& path, const BlockMap& map);

OfflineSchedule read_schedule(const std::string& path, std::size_t* h_out);
void write_schedule(const std::string& path, const OfflineSchedule& schedule,
                    std::size_t h);
void print_schedule(std::ostream& out, const OfflineSchedule& schedule);

VarSizeInstance read_varsize(const std::string& path);
void write_varsize(const std::string& path, const VarSizeInstance& inst);

// CSV with "#" comment lines recording parameters, then a header row.
struct CsvTable {
  std::vector<std::string> comments;  // without leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
std::string csv_to_string(const CsvTable& table);

// Fixed-format numeric cell ("%.10g"), so identical runs are byte-identical.
std::string csv_num(double v);

}  // namespace gcsim
