#include "mg1/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

std::string serialize(const PosteriorSnapshot& snapshot) {
  std::ostringstream out;
  out << "# mg1bayes posterior snapshot\n";
  out << "tool.version=" << snapshot.tool_version << '\n';
  out << "source.digest=" << snapshot.source_digest << '\n';
  out << "gamma.a=" << format_double(snapshot.gamma.shape()) << '\n';
  out << "gamma.b=" << format_double(snapshot.gamma.rate()) << '\n';
  out << "dp.alpha=" << format_double(snapshot.dp.alpha()) << '\n';
  out << "dp.base=" << snapshot.dp.base().to_string() << '\n';
  out << "dp.n_obs=" << snapshot.dp.n_obs() << '\n';
  for (const auto& [k, c] : snapshot.dp.counts()) out << "dp.count." << k << '=' << c << '\n';
  return out.str();
}

PosteriorSnapshot parse_snapshot(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::size_t line_no = 0;
  try {
    for (auto line : split(text, '\n')) {
      ++line_no;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw CorruptData("expected key=value");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.starts_with("dp.count.")) {
        if (!counts.emplace(parse_uint(key.substr(9)), parse_uint(value)).second) {
          throw CorruptData("duplicate count key");
        }
        continue;
      }
      static constexpr std::string_view known[] = {"tool.version", "source.digest", "gamma.a", "gamma.b",
                                                   "dp.alpha",     "dp.base",       "dp.n_obs"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw CorruptData("unknown key '" + std::string(key) + "'");
      }
      if (!fields.emplace(std::string(key), std::string(value)).second) throw CorruptData("duplicate key");
    }
    auto need = [&](std::string_view key) -> const std::string& {
      const auto it = fields.find(key);
      if (it == fields.end()) throw CorruptData("snapshot is missing '" + std::string(key) + "'");
      return it->second;
    };
    line_no = 0;
    PosteriorSnapshot snap{
        GammaPosterior(parse_double(need("gamma.a")), parse_double(need("gamma.b"))),
        DeltaDirichletPosterior(parse_double(need("dp.alpha")), BasePmf::parse(need("dp.base")), counts,
                                parse_uint(need("dp.n_obs"))),
        need("source.digest"), need("tool.version")};
    return snap;
  } catch (const CorruptData& e) {
    throw CorruptData(line_no ? "snapshot line " + std::to_string(line_no) + ": " + e.what() : e.what());
  } catch (const InvalidArgument& e) {
    throw CorruptData(line_no ? "snapshot line " + std::to_string(line_no) + ": " + e.what()
                              : std::string("snapshot: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

PosteriorSnapshot load_snapshot(const std::filesystem::path& path) { return parse_snapshot(read_file(path)); }

void save_snapshot(const std::filesystem::path& path, const PosteriorSnapshot& snapshot) {
  write_file_atomically(path, serialize(snapshot));
}

}  // namespace mg1
