#include "fpnet/templates.hpp"

#include <fstream>
#include <sstream>

#include "fpnet/errors.hpp"

namespace fpnet {

std::vector<PartTemplate> default_templates() {
    return {
        {class_id_from_name("eye"), 0.31, 0.40, 3.0},
        {class_id_from_name("eye"), 0.69, 0.40, 3.0},
        {class_id_from_name("nose"), 0.50, 0.62, 3.0},
        {class_id_from_name("mouth"), 0.50, 0.80, 3.0},
    };
}

std::vector<PartTemplate> parse_templates(const std::string& text) {
    std::vector<PartTemplate> templates;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string name;
        if (!(fields >> name))
            continue; // blank
        PartTemplate t;
        if (!(fields >> t.anchor_x >> t.anchor_y >> t.face_ratio))
            throw ParseError(line_no, "expected 'part_name ax ay k'");
        std::string extra;
        if (fields >> extra)
            throw ParseError(line_no, "trailing field '" + extra + "'");
        t.part = class_id_from_name(name);
        if (t.part < kFirstPartClass)
            throw ParseError(line_no, "'" + name + "' is not a part class");
        if (t.anchor_x < 0.0 || t.anchor_x > 1.0 || t.anchor_y < 0.0 || t.anchor_y > 1.0)
            throw ParseError(line_no, "anchors must be in [0, 1]");
        if (!(t.face_ratio > 0.0))
            throw ParseError(line_no, "face ratio must be positive");
        templates.push_back(t);
    }
    return templates;
}

std::vector<PartTemplate> load_templates(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open template file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_templates(buf.str());
}

} // namespace fpnet
