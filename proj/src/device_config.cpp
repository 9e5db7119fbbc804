#include "bellsim/device_config.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "bellsim/textutil.hpp"

namespace bellsim::device {

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<KeyValue> entries;
};

std::string trim(const std::string& raw) {
    const auto begin = raw.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = raw.find_last_not_of(" \t\r");
    return raw.substr(begin, end - begin + 1);
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream stream(text);
    std::string raw;
    int line_number = 0;
    while (std::getline(stream, raw)) {
        ++line_number;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_number, "unterminated section header");
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_number, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_number, "expected key = value");
        if (sections.empty()) {
            throw ConfigError(line_number, "key before any [section] header");
        }
        KeyValue entry{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_number, false};
        if (entry.key.empty()) throw ConfigError(line_number, "empty key");
        if (entry.value.empty()) throw ConfigError(line_number, "empty value for '" + entry.key + "'");
        sections.back().entries.push_back(std::move(entry));
    }
    return sections;
}

class SectionReader {
  public:
    explicit SectionReader(Section& section) : section_(section) {}

    std::optional<std::string> find(const std::string& key) {
        for (auto& entry : section_.entries) {
            if (entry.key == key) {
                entry.used = true;
                return entry.value;
            }
        }
        return std::nullopt;
    }

    double number(const std::string& key) {
        const auto value = find(key);
        if (!value) {
            throw ConfigError(section_.line,
                              "[" + section_.name + "] is missing required field '" + key + "'");
        }
        return parse_number(key, *value);
    }

    double number_or(const std::string& key, double fallback) {
        const auto value = find(key);
        return value ? parse_number(key, *value) : fallback;
    }

    std::optional<double> optional_number(const std::string& key) {
        const auto value = find(key);
        if (!value) return std::nullopt;
        return parse_number(key, *value);
    }

    std::optional<int> optional_integer(const std::string& key) {
        const auto value = find(key);
        if (!value) return std::nullopt;
        int parsed = 0;
        const char* begin = value->data();
        const char* end = begin + value->size();
        const auto [ptr, ec] = std::from_chars(begin, end, parsed);
        if (ec != std::errc{} || ptr != end) {
            throw ConfigError(line_of(key), "field '" + key + "' must be an integer");
        }
        return parsed;
    }

    double angle(const std::string& key) {
        const auto value = find(key);
        if (!value) {
            throw ConfigError(section_.line,
                              "[" + section_.name + "] is missing required field '" + key + "'");
        }
        try {
            return text::parse_angle(*value);
        } catch (const std::invalid_argument& error) {
            throw ConfigError(line_of(key), std::string("field '") + key + "': " + error.what());
        }
    }

    std::optional<std::string> optional_string(const std::string& key) { return find(key); }

    void finish() const {
        for (const auto& entry : section_.entries) {
            if (!entry.used) {
                throw ConfigError(entry.line, "unknown field '" + entry.key + "' in [" +
                                                  section_.name + "]");
            }
        }
    }

  private:
    double parse_number(const std::string& key, const std::string& value) {
        double parsed = 0.0;
        const char* begin = value.data();
        const char* end = begin + value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, parsed);
        if (ec != std::errc{} || ptr != end) {
            throw ConfigError(line_of(key), "field '" + key + "' must be a number");
        }
        return parsed;
    }

    int line_of(const std::string& key) const {
        for (const auto& entry : section_.entries) {
            if (entry.key == key) return entry.line;
        }
        return section_.line;
    }

    Section& section_;
};

int parse_qubit(SectionReader& reader, const Section& section) {
    const auto qubit = reader.optional_integer("qubit");
    if (!qubit) {
        throw ConfigError(section.line, "[" + section.name + "] is missing required field 'qubit'");
    }
    if (*qubit != 1 && *qubit != 2) {
        throw ConfigError(section.line, "qubit must be 1 or 2");
    }
    return *qubit;
}

}  // namespace

NetworkSpec parse_network_config(const std::string& text) {
    auto sections = tokenize(text);
    if (sections.empty() || sections.front().name != "device") {
        throw ConfigError(sections.empty() ? 1 : sections.front().line,
                          "config must start with a [device] section");
    }

    NetworkSpec network;
    {
        SectionReader reader(sections.front());
        network.material.effective_mass_ratio = reader.number("effective_mass_ratio");
        network.energy_mev = reader.number("energy_mev");
        network.skew_tolerance_fs = reader.number_or("skew_tolerance_fs", 1.0);
        reader.finish();
    }

    for (std::size_t i = 1; i < sections.size(); ++i) {
        Section& section = sections[i];
        SectionReader reader(section);
        ElementSpec element;
        element.config_line = section.line;

        if (section.name == "splitter") {
            element.kind = ElementKind::splitter;
            element.qubit = parse_qubit(reader, section);
            element.tau_fs = reader.number("tau_fs");
            element.coupling_length_nm = reader.optional_number("coupling_length_nm");
        } else if (section.name == "well") {
            element.kind = ElementKind::well;
            element.qubit = parse_qubit(reader, section);
            element.depth_mev = reader.number("depth_mev");
            element.width_nm = reader.optional_number("width_nm");
            element.halfwaves = reader.optional_integer("halfwaves");
            if (const auto mode = reader.optional_string("mode")) {
                if (*mode == "well") {
                    element.mode = PhaseWellMode::well;
                } else if (*mode == "step") {
                    element.mode = PhaseWellMode::step;
                } else {
                    throw ConfigError(section.line, "mode must be 'well' or 'step'");
                }
            }
            if (!element.width_nm && !element.halfwaves) {
                throw ConfigError(section.line, "[well] needs width_nm or halfwaves");
            }
            if (element.width_nm && element.halfwaves) {
                throw ConfigError(section.line, "[well] takes width_nm or halfwaves, not both");
            }
        } else if (section.name == "ab") {
            element.kind = ElementKind::ab_loop;
            element.qubit = parse_qubit(reader, section);
            element.flux_quanta = reader.number("flux");
        } else if (section.name == "coupler") {
            element.kind = ElementKind::coupler;
            element.qubit = 0;
            element.alpha_rad = reader.angle("alpha");
            element.path_nm = {reader.number_or("path1_nm", 0.0), reader.number_or("path2_nm", 0.0)};
            element.offset_fs = {reader.number_or("offset1_fs", 0.0),
                                 reader.number_or("offset2_fs", 0.0)};
        } else {
            throw ConfigError(section.line, "unknown section [" + section.name + "]");
        }
        reader.finish();
        network.elements.push_back(std::move(element));
    }
    return network;
}

NetworkSpec load_network_config(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_network_config(buffer.str());
}

}  // namespace bellsim::device
