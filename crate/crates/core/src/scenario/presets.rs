//! Built-in scenarios. Each is stored as scenario-file text so that presets
//! go through the same parser as user files.

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig3a", "fig3b", "fig4", "fig5"];

const FIG1: &str = "\
[scenario]
name = fig1

[grid]
x_min = -30
x_max = 30
nx = 801
t_max = 12
nt = 400

[slit1]
center = 0
sigma0 = 1

[trajectories]
seeds_per_slit = 21
span = 3

[output]
fields = density, trajectories
";

const TWO_SLITS: &str = "\
[grid]
x_min = -30
x_max = 30
nx = 801
t_max = 12
nt = 400

[slit1]
center = -4
sigma0 = 1

[trajectories]
seeds_per_slit = 21
span = 3

[output]
fields = density, phase_difference, entangling_current, trajectories
";

fn two_slits(name: &str, sigma02: &str, shifter: &str) -> String {
    format!("[scenario]\nname = {name}\n\n{TWO_SLITS}\n[slit2]\ncenter = 4\nsigma0 = {sigma02}\n{shifter}")
}

/// Text of a preset, or `None` for an unknown name.
pub fn preset_text(name: &str) -> Option<String> {
    Some(match name {
        "fig1" => FIG1.to_string(),
        "fig3a" => two_slits(name, "1", ""),
        "fig3b" => two_slits(name, "0.5", ""),
        "fig4" => two_slits(
            name,
            "1",
            "\n[shifter]\ntotal_shift = 3pi\nt1 = 1\nt2 = 3\n",
        ),
        "fig5" => two_slits(
            name,
            "1",
            "\n[shifter]\ntotal_shift = 5pi\nt1 = 4\nt2 = 6\n",
        ),
        _ => return None,
    })
}

/// One-line description for listings.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => "single Gaussian slit spreading, with trajectories",
        "fig3a" => "two equal slits at +-4",
        "fig3b" => "two slits at +-4 with widths 1 and 0.5",
        "fig4" => "equal slits, 3 pi phase shift ramped over t in [1, 3]",
        "fig5" => "equal slits, 5 pi phase shift ramped over t in [4, 6]",
        _ => return None,
    })
}
