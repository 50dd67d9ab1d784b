#include <fstream>
#include <map>
#include <string>

#include "bayesr/error.hpp"
#include "bayesr/image_io.hpp"
#include "bayesr/state_io.hpp"

namespace bayesr {

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kMagic = "bayesr-state 1";

std::string field_file(int channel, const char* name) {
  return "c" + std::to_string(channel) + "_" + name + ".pfm";
}

}  // namespace

void quantize_to_float(VariationalState& state) {
  for (const StateField& f : state_fields()) {
    for (double& v : (state.*f.member).values()) {
      v = static_cast<double>(static_cast<float>(v));
    }
  }
}

void dump_state(const std::vector<VariationalState>& channels,
                const std::filesystem::path& dir) {
  if (channels.empty()) throw InvalidInput("dump_state: no channels");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir)) {
    throw InvalidInput("dump_state: cannot create " + dir.string());
  }
  std::ofstream manifest(dir / kManifest);
  if (!manifest) {
    throw InvalidInput("dump_state: cannot write manifest in " + dir.string());
  }
  manifest << kMagic << '\n' << "channels " << channels.size() << '\n';
  for (std::size_t c = 0; c < channels.size(); ++c) {
    channels[c].validate();
    for (const StateField& f : state_fields()) {
      const ImagePlane& p = channels[c].*f.member;
      const std::string file = field_file(static_cast<int>(c), f.name);
      write_pfm(ImageStack(p), dir / file);
      manifest << f.name << ' ' << c << ' ' << p.height() << ' ' << p.width()
               << ' ' << f.role << ' ' << file << '\n';
    }
  }
  if (!manifest) throw InvalidInput("dump_state: failed writing manifest");
}

std::vector<VariationalState> load_state(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / kManifest);
  if (!manifest) {
    throw InvalidInput("load_state: no manifest in " + dir.string());
  }
  std::string line;
  if (!std::getline(manifest, line) || line != kMagic) {
    throw InvalidInput("load_state: unrecognized manifest header");
  }
  std::string word;
  std::size_t count = 0;
  if (!(manifest >> word >> count) || word != "channels" || count == 0) {
    throw InvalidInput("load_state: bad channel count");
  }
  std::map<std::string, const StateField*> by_name;
  for (const StateField& f : state_fields()) by_name[f.name] = &f;

  std::vector<VariationalState> states(count);
  std::vector<std::map<std::string, bool>> seen(count);
  std::string name, role, file;
  std::size_t channel = 0;
  int h = 0;
  int w = 0;
  while (manifest >> name >> channel >> h >> w >> role >> file) {
    auto it = by_name.find(name);
    if (it == by_name.end() || channel >= count) {
      throw InvalidInput("load_state: unknown entry '" + name + "'");
    }
    if (role != it->second->role) {
      throw InvalidInput("load_state: role mismatch for " + name);
    }
    const ImageStack img = read_pfm(dir / file);
    if (img.channels() != 1 || img.shape() != Shape{h, w}) {
      throw InvalidInput("load_state: " + file + " disagrees with manifest");
    }
    states[channel].*(it->second->member) = img.channel(0);
    seen[channel][name] = true;
  }
  if (!manifest.eof()) throw InvalidInput("load_state: malformed manifest");
  for (std::size_t c = 0; c < count; ++c) {
    if (seen[c].size() != state_fields().size()) {
      throw InvalidInput("load_state: channel " + std::to_string(c) +
                         " is missing fields");
    }
    states[c].validate();
  }
  return states;
}

}  // namespace bayesr
