#include "gcsim/types.hpp"

#include <charconv>

#include "gcsim/errors.hpp"

namespace gcsim {

std::string to_string(const ItemId& item) {
  return std::to_string(item.block) + "." + std::to_string(item.index);
}

ItemId parse_item(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
    throw ParseError("bad item id '" + text + "', expected block.index");
  ItemId item;
  auto parse_u32 = [&](const char* first, const char* last, std::uint32_t& v) {
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
      throw ParseError("bad item id '" + text + "'");
  };
  parse_u32(text.data(), text.data() + dot, item.block);
  parse_u32(text.data() + dot + 1, text.data() + text.size(), item.index);
  return item;
}

std::vector<ItemId> BlockMap::block_items(std::uint32_t block) const {
  std::vector<ItemId> items;
  auto it = blocks.find(block);
  if (it == blocks.end()) return items;
  items.reserve(it->second);
  for (std::uint32_t i = 0; i < it->second; ++i) items.push_back({block, i});
  return items;
}

std::size_t BlockMap::total_items() const {
  std::size_t total = 0;
  for (const auto& [id, count] : blocks) total += count;
  return total;
}

std::vector<std::string> validate_block_map(const BlockMap& map) {
  std::vector<std::string> violations;
  if (map.max_block_size < 1) violations.push_back("B must be >= 1");
  for (const auto& [id, count] : map.blocks) {
    if (count == 0)
      violations.push_back("block " + std::to_string(id) + " is empty");
    else if (count > map.max_block_size)
      violations.push_back("block " + std::to_string(id) + " size " +
                           std::to_string(count) + " > B=" +
                           std::to_string(map.max_block_size));
  }
  return violations;
}

}  // namespace gcsim
