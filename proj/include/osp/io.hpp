#ifndef OSP_IO_HPP
#define OSP_IO_HPP

#include <string>
#include <vector>

#include "osp/greedy.hpp"
#include "osp/instances.hpp"
#include "osp/tree.hpp"

namespace osp {

// Instance files: a self-describing record with fields n, orientation
// ("cost"|"valuation"), domains (arrays of decimal strings, parsed exactly,
// scientific notation rejected) and a tagged family union.
SetSystemInstance parse_instance_json(const std::string& text);
std::string instance_to_json(const SetSystemInstance& inst);
SetSystemInstance load_instance_file(const std::string& path);

// Priority-table files: an array of records {agent, direction, type,
// history ("*" or map agent->decimal string), rank}. The loader enforces
// the strict total rank order and domain membership.
PriorityTable parse_table_json(const std::string& text,
                               const SetSystemInstance& inst);
std::string table_to_json(const PriorityTable& table);
PriorityTable load_table_file(const std::string& path,
                              const SetSystemInstance& inst);

// Tree dumps: preorder node list with queried agent, parts as sorted type
// lists, and leaf outcomes; stable across runs, used by golden tests.
std::string dump_tree(const SetSystemInstance& inst,
                      const ImplementationTree& tree);
ImplementationTree parse_tree_json(const std::string& text,
                                   const SetSystemInstance& inst);
ImplementationTree load_tree_file(const std::string& path,
                                  const SetSystemInstance& inst);

std::string payments_to_json(const SetSystemInstance& inst,
                             const std::vector<std::vector<Rational>>& pay);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Instance by builtin id or file path (a path wins when the file exists).
SetSystemInstance instance_from_arg(const std::string& arg);
/// Table by builtin id or file path.
PriorityTable table_from_arg(const std::string& arg,
                             const SetSystemInstance& inst);

}  // namespace osp

#endif
