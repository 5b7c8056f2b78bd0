"""
MAPFlow Themes
Palettes for the SVG figures
"""

from typing import Dict, List, Tuple

THEMES: Dict[str, Dict[str, object]] = {
    "light": {
        "name": "Light",
        "background": "#ffffff",
        "foreground": "#222222",
        "grid": "#dddddd",
        "agents": ["#1f77b4", "#7b3fb3", "#2ca02c", "#d62728", "#ff7f0e",
                   "#17becf", "#8c564b", "#e377c2"],
        "tau": "#555555",
        "configs": {"A": ("#1f77b4", "o"), "B": ("#ff7f0e", "s")},
    },
    "dark": {
        "name": "Dark",
        "background": "#1e1e1e",
        "foreground": "#eeeeee",
        "grid": "#444444",
        "agents": ["#4fc3f7", "#ba68c8", "#81c784", "#e57373", "#ffb74d",
                   "#4dd0e1", "#a1887f", "#f48fb1"],
        "tau": "#bbbbbb",
        "configs": {"A": ("#4fc3f7", "o"), "B": ("#ffb74d", "s")},
    },
}

DEFAULT_THEME = "light"


def get_theme_list() -> List[Tuple[str, str]]:
    """(theme_id, display name) pairs"""
    return [(theme_id, str(theme["name"])) for theme_id, theme in THEMES.items()]


def get_theme(theme_id: str) -> Dict[str, object]:
    """Palette by id, falling back to the default"""
    return THEMES.get(theme_id, THEMES[DEFAULT_THEME])


def agent_color(theme: Dict[str, object], index: int) -> str:
    """Color of agent `index` (0-based), cycling through the palette"""
    colors = theme["agents"]
    return colors[index % len(colors)]


def config_style(theme: Dict[str, object], config: str) -> Tuple[str, str]:
    """(color, marker) of a parametric configuration"""
    return theme["configs"].get(config, (theme["foreground"], "^"))
