//! The `mirrork` command-line frontend: load a lattice, run a pipeline,
//! print tables or JSON. Batch-oriented; identical inputs produce
//! byte-identical output.
//!
//! Exit codes: 0 success, 2 input validation failure, 3 unsupported size or
//! rank, 4 internal cross-check mismatch (always a bug). Errors print one
//! machine-parsable line on the diagnostic stream:
//! `error: <tag>: <message>`.

use crate::bredon::{self, constant_z};
use crate::catalog;
use crate::eqcell::{self, build_complex, Backend, BuildOptions, EquivariantCellComplex};
use crate::error::{Error, Result};
use crate::exactalg::AbGroup;
use crate::glattice::{self, GLattice, Subgroup};
use crate::groupcoh;
use crate::ktheory::{
    self, collapse_by_lacunarity, e2_page, finite_field_mackey, quillen_k_groups,
    quillen_restriction_maps, swan_rank1, MackeyData,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;

#[derive(Parser)]
#[command(
    name = "mirrork",
    about = "K-theory of algebraic tori via equivariant homology of the character-lattice torus",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Auto,
    Cubical,
    Delone,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::Cubical => Backend::Cubical,
            BackendArg::Delone => Backend::Delone,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Lattice source: a glattice/1 JSON file or catalog:<name>.
    input: String,
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
    /// Allow the Delaunay backend up to this rank (4 prints a warning).
    #[arg(long, default_value_t = 3)]
    delone_rank_cap: usize,
}

impl BuildArgs {
    fn options(&self) -> BuildOptions {
        BuildOptions {
            backend: self.backend.into(),
            max_cells: eqcell::max_cells_default(),
            delone_max_rank: self.delone_rank_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a lattice: rank, group, subgroup classes, H¹, fixed ranks.
    Lattice {
        #[command(subcommand)]
        sub: LatticeCmd,
    },
    /// Build the equivariant cell structure on the torus of the lattice.
    Cells {
        #[command(subcommand)]
        sub: CellsCmd,
    },
    /// Bredon homology of the torus with the chosen coefficients.
    Bredon {
        #[command(flatten)]
        build: BuildArgs,
        /// constZ or mackey:<file>.
        #[arg(long, default_value = "constZ")]
        coeff: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// K₀ three ways: chain H₀, coend presentation, Merkurjev–Panin.
    Kzero {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// The Atiyah–Hirzebruch E² page over a finite-field preset.
    E2 {
        #[command(flatten)]
        build: BuildArgs,
        /// Coefficient preset, e.g. ff:3,2 for F_3 with a quadratic splitting
        /// field.
        #[arg(long)]
        preset: String,
        /// Highest coefficient degree (row) to compute.
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// The rank-1 K-groups from the two-cell cofiber sequence.
    Swan {
        /// Field preset, e.g. ff:3 (the quadratic extension is implied).
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Built-in example lattices.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    Info {
        input: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CellsCmd {
    Build {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Write the full complex as eqcw/1 JSON to this path.
        #[arg(long)]
        export: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// Run with explicit argv and output sinks; returns the process exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with success codes.
            if e.use_stderr() {
                let _ = writeln!(err, "error: validation: {e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.tag(), e);
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Lattice {
            sub: LatticeCmd::Info { input, format },
        } => lattice_info(&input, format, out),
        Command::Cells {
            sub:
                CellsCmd::Build {
                    build,
                    format,
                    export,
                },
        } => cells_build(&build, format, export.as_deref(), out),
        Command::Bredon {
            build,
            coeff,
            format,
        } => bredon_cmd(&build, &coeff, format, out),
        Command::Kzero { build, format } => kzero(&build, format, out),
        Command::E2 {
            build,
            preset,
            qmax,
            format,
        } => e2_cmd(&build, &preset, qmax, format, out),
        Command::Swan {
            preset,
            nmax,
            format,
        } => swan_cmd(&preset, nmax, format, out),
        Command::Catalog {
            sub: CatalogCmd::List { format },
        } => catalog_list(format, out),
    }
}

/// Resolve `catalog:<name>` or a glattice/1 JSON path.
fn load_lattice(input: &str) -> Result<(String, GLattice)> {
    if let Some(name) = input.strip_prefix("catalog:") {
        let entry = catalog::get(name)?;
        return Ok((format!("catalog:{}", entry.name), entry.lattice));
    }
    let text = std::fs::read_to_string(input)?;
    Ok((input.to_string(), glattice::json::parse(&text)?))
}

fn group_display(g: &AbGroup) -> String {
    g.to_string()
}

fn ab_schema(g: &AbGroup) -> (usize, Vec<i64>) {
    g.to_schema()
}

// ---------------------------------------------------------------- lattice

#[derive(Serialize)]
struct ClassInfo {
    order: usize,
    index: usize,
    elements: Vec<u16>,
    conjugates: usize,
    h1: (usize, Vec<i64>),
    fixed_rank: usize,
}

#[derive(Serialize)]
struct LatticeInfo {
    source: String,
    rank: usize,
    group_order: usize,
    abelian: bool,
    monomial: bool,
    permutation: bool,
    subgroup_classes: Vec<ClassInfo>,
    lattice: glattice::json::GLatticeFile,
}

fn lattice_info(input: &str, format: Format, out: &mut dyn Write) -> Result<()> {
    let (source, lat) = load_lattice(input)?;
    let classes = glattice::enumerate_subgroups(lat.group())?;
    let mut infos = Vec::new();
    for class in &classes {
        let h = &class.representative;
        let coh = groupcoh::h1(&lat, h)?;
        let fixed = glattice::fixed_sublattice(&lat, h)?;
        infos.push(ClassInfo {
            order: h.order(),
            index: lat.group().order() / h.order(),
            elements: h.elements().to_vec(),
            conjugates: class.conjugates.len(),
            h1: ab_schema(&coh.group),
            fixed_rank: fixed.cols(),
        });
    }
    let info = LatticeInfo {
        source,
        rank: lat.rank(),
        group_order: lat.group().order(),
        abelian: lat.group().is_abelian(),
        monomial: lat.is_monomial(),
        permutation: lat.is_permutation(),
        subgroup_classes: infos,
        lattice: glattice::json::to_file(&lat),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&info)?)?,
        Format::Table => {
            writeln!(out, "lattice: {}", info.source)?;
            writeln!(out, "rank: {}", info.rank)?;
            writeln!(
                out,
                "group: order {}{}",
                info.group_order,
                if info.abelian { " (abelian)" } else { "" }
            )?;
            writeln!(
                out,
                "action: {}",
                if info.permutation {
                    "permutation"
                } else if info.monomial {
                    "signed permutation"
                } else {
                    "general unimodular"
                }
            )?;
            writeln!(out, "subgroup classes (H1 = components of the fixed torus):")?;
            for (i, c) in info.subgroup_classes.iter().enumerate() {
                let h1 = AbGroup::from_schema(c.h1.0, &c.h1.1)?;
                writeln!(
                    out,
                    "  class {i}: |H| = {}, conjugates {}, H1(H) = {}, fixed rank {}",
                    c.order,
                    c.conjugates,
                    group_display(&h1),
                    c.fixed_rank
                )?;
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ cells

#[derive(Serialize)]
struct CellsSummary {
    source: String,
    backend: String,
    subdivisions: u32,
    cells_per_degree: Vec<usize>,
    orbits_per_degree: Vec<usize>,
    euler_characteristic: i64,
    underlying_homology: Vec<(usize, Vec<i64>)>,
}

fn build_summary(source: &str, x: &EquivariantCellComplex) -> CellsSummary {
    CellsSummary {
        source: source.to_string(),
        backend: match x.backend_used() {
            Backend::Cubical => "cubical".into(),
            Backend::Delone => "delone".into(),
            Backend::Auto => "auto".into(),
        },
        subdivisions: x.subdivisions(),
        cells_per_degree: (0..=x.dimension()).map(|p| x.cells(p).len()).collect(),
        orbits_per_degree: (0..=x.dimension()).map(|p| x.orbit_reps(p).len()).collect(),
        euler_characteristic: x.euler_characteristic(),
        underlying_homology: x.underlying_homology().iter().map(ab_schema).collect(),
    }
}

fn cells_build(
    build: &BuildArgs,
    format: Format,
    export: Option<&str>,
    out: &mut dyn Write,
) -> Result<()> {
    let (source, lat) = load_lattice(&build.input)?;
    let x = build_complex(&lat, &build.options())?;
    if let Some(path) = export {
        std::fs::write(path, eqcell::export::to_json(&x))?;
    }
    let summary = build_summary(&source, &x);
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?,
        Format::Table => {
            writeln!(out, "complex for {}", summary.source)?;
            writeln!(
                out,
                "backend: {} (subdivisions: {})",
                summary.backend, summary.subdivisions
            )?;
            writeln!(out, "cells per degree: {:?}", summary.cells_per_degree)?;
            writeln!(out, "orbits per degree: {:?}", summary.orbits_per_degree)?;
            writeln!(out, "euler characteristic: {}", summary.euler_characteristic)?;
            let h: Vec<String> = summary
                .underlying_homology
                .iter()
                .map(|(f, t)| {
                    AbGroup::from_schema(*f, t)
                        .map(|g| g.to_string())
                        .unwrap_or_default()
                })
                .collect();
            writeln!(out, "underlying homology: [{}]", h.join(", "))?;
        }
    }
    Ok(())
}

// ----------------------------------------------------------------- bredon

#[derive(Serialize)]
struct HomologyOut {
    source: String,
    coefficients: String,
    #[serde(rename = "H")]
    h: Vec<(usize, Vec<i64>)>,
}

fn bredon_cmd(
    build: &BuildArgs,
    coeff: &str,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let (source, lat) = load_lattice(&build.input)?;
    let x = build_complex(&lat, &build.options())?;
    let h = if coeff == "constZ" {
        let z = constant_z(lat.group())?;
        bredon::homology(&bredon::chain_complex(&x, &z)?)?
    } else if let Some(path) = coeff.strip_prefix("mackey:") {
        let text = std::fs::read_to_string(path)?;
        let data = ktheory::mackey_from_json(lat.group(), &text)?;
        let cov = ktheory::MackeyCovariant(&data);
        bredon::homology(&bredon::chain_complex(&x, &cov)?)?
    } else {
        return Err(Error::validation(format!(
            "unknown coefficient spec {coeff:?}; use constZ or mackey:<file>"
        )));
    };
    let result = HomologyOut {
        source,
        coefficients: coeff.to_string(),
        h: h.iter().map(ab_schema).collect(),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
        Format::Table => {
            writeln!(
                out,
                "Bredon homology of {} with {}",
                result.source, result.coefficients
            )?;
            for (p, hp) in h.iter().enumerate() {
                writeln!(out, "  H_{p} = {}", group_display(hp))?;
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ kzero

#[derive(Serialize)]
struct KzeroOut {
    source: String,
    chain_h0: (usize, Vec<i64>),
    coend: (usize, Vec<i64>),
    merkurjev_panin: (usize, Vec<i64>),
    verdict: String,
}

fn kzero(build: &BuildArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let (source, lat) = load_lattice(&build.input)?;
    let x = build_complex(&lat, &build.options())?;
    let report = bredon::k0_report(&x, &lat)?;
    let result = KzeroOut {
        source: source.clone(),
        chain_h0: ab_schema(&report.chain_h0),
        coend: ab_schema(&report.coend.group),
        merkurjev_panin: ab_schema(&report.merkurjev_panin.group),
        verdict: if report.agree { "AGREE" } else { "MISMATCH" }.to_string(),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
        Format::Table => {
            writeln!(out, "K0 of {source} three ways:")?;
            writeln!(out, "  chain H0          : {}", report.chain_h0)?;
            writeln!(out, "  coend presentation: {}", report.coend.group)?;
            writeln!(out, "  Merkurjev-Panin   : {}", report.merkurjev_panin.group)?;
            writeln!(out, "verdict: {}", result.verdict)?;
        }
    }
    if !report.agree {
        return Err(Error::CrossCheck(format!(
            "K0 routes disagree on {source}: chain {}, coend {}, MP {}",
            report.chain_h0, report.coend.group, report.merkurjev_panin.group
        )));
    }
    Ok(())
}

// --------------------------------------------------------------------- e2

fn parse_ff_preset(preset: &str, want_degree: bool) -> Result<(u64, usize)> {
    let body = preset
        .strip_prefix("ff:")
        .ok_or_else(|| Error::validation(format!("unknown preset {preset:?}; use ff:q[,d]")))?;
    if want_degree {
        let (q, d) = body
            .split_once(',')
            .ok_or_else(|| Error::validation("preset ff needs q,d (e.g. ff:3,2)"))?;
        let q: u64 = q
            .parse()
            .map_err(|_| Error::validation("bad q in preset"))?;
        let d: usize = d
            .parse()
            .map_err(|_| Error::validation("bad d in preset"))?;
        Ok((q, d))
    } else {
        let q: u64 = body
            .parse()
            .map_err(|_| Error::validation("bad q in preset"))?;
        Ok((q, 2))
    }
}

#[derive(Serialize)]
struct E2Out {
    source: String,
    preset: String,
    rank: usize,
    q_max: usize,
    /// entries[q][p] as [free, [torsion...]]
    entries: Vec<Vec<(usize, Vec<i64>)>>,
    collapse_certified: bool,
    collapse_reason: String,
    graded: Option<Vec<GradedOut>>,
}

#[derive(Serialize)]
struct GradedOut {
    total_degree: usize,
    pieces: Vec<(usize, (usize, Vec<i64>))>,
    extension_ambiguous: bool,
}

fn e2_cmd(
    build: &BuildArgs,
    preset: &str,
    qmax: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let (source, lat) = load_lattice(&build.input)?;
    let (q, d) = parse_ff_preset(preset, true)?;
    let x = build_complex(&lat, &build.options())?;
    let rows: Vec<MackeyData> = (0..=qmax)
        .map(|n| finite_field_mackey(q, d, n, lat.group()))
        .collect::<Result<_>>()?;
    let page = e2_page(&x, &rows)?;
    let cert = collapse_by_lacunarity(&page);
    let result = E2Out {
        source: source.clone(),
        preset: preset.to_string(),
        rank: page.rank,
        q_max: page.q_max,
        entries: page
            .entries
            .iter()
            .map(|row| row.iter().map(ab_schema).collect())
            .collect(),
        collapse_certified: cert.certified,
        collapse_reason: cert.reason.clone(),
        graded: cert.graded.as_ref().map(|lines| {
            lines
                .iter()
                .map(|l| GradedOut {
                    total_degree: l.total_degree,
                    pieces: l
                        .pieces
                        .iter()
                        .map(|(p, g)| (*p, ab_schema(g)))
                        .collect(),
                    extension_ambiguous: l.extension_ambiguous,
                })
                .collect()
        }),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
        Format::Table => {
            writeln!(out, "E2 page for {source} over {preset}:")?;
            // Aligned grid, rows from the top.
            let mut cells: Vec<Vec<String>> = Vec::new();
            for q_row in (0..=page.q_max).rev() {
                let mut row = vec![format!("q={q_row}")];
                for p in 0..=page.rank {
                    row.push(page.entry(p, q_row).to_string());
                }
                cells.push(row);
            }
            let mut head = vec![String::new()];
            for p in 0..=page.rank {
                head.push(format!("p={p}"));
            }
            cells.insert(0, head);
            write_aligned(out, &cells)?;
            writeln!(
                out,
                "collapse: {} ({})",
                if cert.certified {
                    "certified"
                } else {
                    "not certified"
                },
                cert.reason
            )?;
            if let Some(lines) = &cert.graded {
                for l in lines {
                    let pieces: Vec<String> = l
                        .pieces
                        .iter()
                        .map(|(p, g)| format!("{g} (p={p})"))
                        .collect();
                    writeln!(
                        out,
                        "  gr K_{} = {{{}}}{}",
                        l.total_degree,
                        if pieces.is_empty() {
                            "0".to_string()
                        } else {
                            pieces.join(", ")
                        },
                        if l.extension_ambiguous {
                            "  [extension ambiguous]"
                        } else {
                            ""
                        }
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn write_aligned(out: &mut dyn Write, rows: &[Vec<String>]) -> Result<()> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(&format!("{:width$}  ", cell, width = widths[i]));
        }
        writeln!(out, "{}", line.trim_end())?;
    }
    Ok(())
}

// ------------------------------------------------------------------- swan

#[derive(Serialize)]
struct SwanOut {
    preset: String,
    degrees: Vec<SwanDegreeOut>,
}

#[derive(Serialize)]
struct SwanDegreeOut {
    n: usize,
    field: (usize, Vec<i64>),
    coker: (usize, Vec<i64>),
    ker_below: (usize, Vec<i64>),
    extension_ambiguous: bool,
}

fn swan_cmd(preset: &str, nmax: usize, format: Format, out: &mut dyn Write) -> Result<()> {
    let (q, _) = parse_ff_preset(preset, false)?;
    if !crate::ktheory::MACKEY_SCHEMA_VERSION.is_empty() {
        // no-op; keeps the module linked in minimal builds
    }
    let kf = quillen_k_groups(q, 1, nmax)?;
    let ke = quillen_k_groups(q, 2, nmax)?;
    let res = quillen_restriction_maps(nmax);
    let sw = swan_rank1(&kf, &ke, &res)?;
    let result = SwanOut {
        preset: preset.to_string(),
        degrees: sw
            .iter()
            .enumerate()
            .map(|(n, d)| SwanDegreeOut {
                n,
                field: ab_schema(&d.field_part),
                coker: ab_schema(&d.coker),
                ker_below: ab_schema(&d.ker_below),
                extension_ambiguous: d.extension_ambiguous,
            })
            .collect(),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
        Format::Table => {
            writeln!(out, "rank-1 K-groups over {preset} (quadratic extension):")?;
            let mut rows = vec![vec![
                "n".to_string(),
                "K_n(F)".to_string(),
                "coker(res_n)".to_string(),
                "ker(res_{n-1})".to_string(),
                "K_n(T_a)".to_string(),
            ]];
            for (n, d) in sw.iter().enumerate() {
                let (p0, p1) = sw[n].graded_pieces();
                let total = if d.extension_ambiguous {
                    format!("gr: {} | {}", p0, p1)
                } else {
                    p0.direct_sum(&p1).to_string()
                };
                rows.push(vec![
                    n.to_string(),
                    d.field_part.to_string(),
                    d.coker.to_string(),
                    d.ker_below.to_string(),
                    total,
                ]);
            }
            write_aligned(out, &rows)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- catalog

#[derive(Serialize)]
struct CatalogOut {
    entries: Vec<CatalogEntryOut>,
}

#[derive(Serialize)]
struct CatalogEntryOut {
    name: String,
    rank: usize,
    group_order: usize,
    note: String,
}

fn catalog_list(format: Format, out: &mut dyn Write) -> Result<()> {
    let entries = catalog::all()?;
    let result = CatalogOut {
        entries: entries
            .iter()
            .map(|e| CatalogEntryOut {
                name: e.name.to_string(),
                rank: e.lattice.rank(),
                group_order: e.lattice.group().order(),
                note: e.note.to_string(),
            })
            .collect(),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
        Format::Table => {
            let mut rows = vec![vec![
                "name".to_string(),
                "rank".to_string(),
                "|G|".to_string(),
                "description".to_string(),
            ]];
            for e in &result.entries {
                rows.push(vec![
                    e.name.clone(),
                    e.rank.to_string(),
                    e.group_order.to_string(),
                    e.note.clone(),
                ]);
            }
            write_aligned(out, &rows)?;
        }
    }
    Ok(())
}

/// Convenience used by the fixed-point examples and tests.
pub fn fixed_point_summary(lat: &GLattice, x: &EquivariantCellComplex) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for class in x.classes() {
        let h: &Subgroup = &class.representative;
        let fixed = eqcell::fixed_subcomplex(x, h)?;
        let (components, rank) = groupcoh::pi0_fixed_points(lat, h)?;
        lines.push(format!(
            "|H| = {}: {} components (H1 order {}), identity component dimension {}",
            h.order(),
            fixed.component_count,
            components
                .order()
                .map(|o| o.to_string())
                .unwrap_or_else(|| "inf".into()),
            rank
        ));
    }
    Ok(lines)
}
