//! Problem definition and the WCCI-2020 keyword-section file format.
//!
//! Nodes are renumbered on load: the depot is node `0`, customers follow as
//! `1..=|Vc|` in file order, and charging stations take the remaining ids
//! `|Vc|+1..pz`. The original file labels are kept for output.

use std::fmt;
use std::ops::Range;
use std::time::Duration;

/// Internal node index (`0` is always the depot).
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    /// Label used in the instance file.
    pub label: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Customer {
    pub site: Site,
    pub demand: u64,
}

/// An immutable, validated E-CVRP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    depot: Site,
    customers: Vec<Customer>,
    stations: Vec<Site>,
    cargo_capacity: u64,
    battery_capacity: f64,
    consumption_rate: f64,
    fleet_size: usize,
    upper_bound: Option<f64>,
    // demand indexed by internal node id; zero for depot and stations
    demand: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceError {
    MissingSection(&'static str),
    Malformed { line: usize, message: String },
    DuplicateNodeId { line: usize, label: usize },
    UnknownNode { line: usize, label: usize },
    MissingDemand { label: usize },
    NonPositiveDemand { line: usize, label: usize },
    DemandExceedsCapacity { line: usize, label: usize, demand: u64, capacity: u64 },
    InvalidParameter { field: &'static str, value: f64 },
    DepotConflict { label: usize },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingSection(s) => write!(f, "missing section or keyword `{s}`"),
            Self::Malformed { line, message } => write!(f, "line {line}: {message}"),
            Self::DuplicateNodeId { line, label } => {
                write!(f, "line {line}: node id {label} defined twice")
            }
            Self::UnknownNode { line, label } => {
                write!(f, "line {line}: node id {label} has no coordinates")
            }
            Self::MissingDemand { label } => write!(f, "customer {label} has no DEMAND_SECTION entry"),
            Self::NonPositiveDemand { line, label } => {
                write!(f, "line {line}: customer {label} has non-positive demand")
            }
            Self::DemandExceedsCapacity { line, label, demand, capacity } => write!(
                f,
                "line {line}: customer {label} demand {demand} exceeds CAPACITY {capacity}"
            ),
            Self::InvalidParameter { field, value } => {
                write!(f, "`{field}` must be positive, got {value}")
            }
            Self::DepotConflict { label } => {
                write!(f, "depot {label} cannot also be a customer or station")
            }
        }
    }
}

impl std::error::Error for InstanceError {}

/// Builder-style description used by [`Instance::new`].
#[derive(Debug, Clone)]
pub struct InstanceParts {
    pub name: String,
    pub depot: Site,
    pub customers: Vec<Customer>,
    pub stations: Vec<Site>,
    pub cargo_capacity: u64,
    pub battery_capacity: f64,
    pub consumption_rate: f64,
    pub fleet_size: usize,
    pub upper_bound: Option<f64>,
}

impl Instance {
    /// Validates the parts and builds an instance. Line numbers in errors are
    /// reported as `0` since there is no source file.
    pub fn new(parts: InstanceParts) -> Result<Self, InstanceError> {
        let InstanceParts {
            name,
            depot,
            customers,
            stations,
            cargo_capacity,
            battery_capacity,
            consumption_rate,
            fleet_size,
            upper_bound,
        } = parts;
        for (field, value) in [
            ("CAPACITY", cargo_capacity as f64),
            ("ENERGY_CAPACITY", battery_capacity),
            ("ENERGY_CONSUMPTION", consumption_rate),
            ("VEHICLES", fleet_size as f64),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(InstanceError::InvalidParameter { field, value });
            }
        }
        let mut seen = std::collections::HashSet::new();
        seen.insert(depot.label);
        for c in &customers {
            if c.site.label == depot.label {
                return Err(InstanceError::DepotConflict { label: depot.label });
            }
            if !seen.insert(c.site.label) {
                return Err(InstanceError::DuplicateNodeId { line: 0, label: c.site.label });
            }
            if c.demand == 0 {
                return Err(InstanceError::NonPositiveDemand { line: 0, label: c.site.label });
            }
            if c.demand > cargo_capacity {
                return Err(InstanceError::DemandExceedsCapacity {
                    line: 0,
                    label: c.site.label,
                    demand: c.demand,
                    capacity: cargo_capacity,
                });
            }
        }
        for s in &stations {
            if s.label == depot.label {
                return Err(InstanceError::DepotConflict { label: depot.label });
            }
            if !seen.insert(s.label) {
                return Err(InstanceError::DuplicateNodeId { line: 0, label: s.label });
            }
        }
        let mut demand = vec![0; 1 + customers.len() + stations.len()];
        for (k, c) in customers.iter().enumerate() {
            demand[k + 1] = c.demand;
        }
        Ok(Self {
            name,
            depot,
            customers,
            stations,
            cargo_capacity,
            battery_capacity,
            consumption_rate,
            fleet_size,
            upper_bound,
            demand,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depot(&self) -> NodeId {
        0
    }

    pub fn num_customers(&self) -> usize {
        self.customers.len()
    }

    pub fn num_stations(&self) -> usize {
        self.stations.len()
    }

    /// `pz = 1 + |Vc| + |Vf|`.
    pub fn problem_size(&self) -> usize {
        1 + self.customers.len() + self.stations.len()
    }

    pub fn customers(&self) -> Range<NodeId> {
        1..1 + self.customers.len()
    }

    pub fn stations(&self) -> Range<NodeId> {
        1 + self.customers.len()..self.problem_size()
    }

    pub fn is_customer(&self, node: NodeId) -> bool {
        node >= 1 && node <= self.customers.len()
    }

    pub fn is_station(&self, node: NodeId) -> bool {
        node > self.customers.len() && node < self.problem_size()
    }

    /// Depot and stations restore the battery to full.
    pub fn is_charging_point(&self, node: NodeId) -> bool {
        node == 0 || self.is_station(node)
    }

    pub fn demand(&self, node: NodeId) -> u64 {
        self.demand[node]
    }

    pub fn cargo_capacity(&self) -> u64 {
        self.cargo_capacity
    }

    pub fn battery_capacity(&self) -> f64 {
        self.battery_capacity
    }

    pub fn consumption_rate(&self) -> f64 {
        self.consumption_rate
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn upper_bound(&self) -> Option<f64> {
        self.upper_bound
    }

    /// Distance covered on a full battery, `Q_b / h`.
    pub fn cruising_range(&self) -> f64 {
        self.battery_capacity / self.consumption_rate
    }

    pub fn total_demand(&self) -> u64 {
        self.customers.iter().map(|c| c.demand).sum()
    }

    pub fn site(&self, node: NodeId) -> Site {
        let nc = self.customers.len();
        match node {
            0 => self.depot,
            n if n <= nc => self.customers[n - 1].site,
            n => self.stations[n - nc - 1],
        }
    }

    pub fn label(&self, node: NodeId) -> usize {
        self.site(node).label
    }

    pub fn node_by_label(&self, label: usize) -> Option<NodeId> {
        (0..self.problem_size()).find(|&n| self.label(n) == label)
    }

    /// Parses a WCCI-2020 style `.evrp` file.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        parse_evrp(text)
    }

    /// Serializes back into the keyword-section format. Reparsing the output
    /// yields an identical instance.
    pub fn to_evrp_string(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "NAME: {}", self.name);
        let _ = writeln!(out, "TYPE: EVRP");
        if let Some(ub) = self.upper_bound {
            let _ = writeln!(out, "OPTIMAL_VALUE: {ub}");
        }
        let _ = writeln!(out, "VEHICLES: {}", self.fleet_size);
        let _ = writeln!(out, "DIMENSION: {}", 1 + self.customers.len());
        let _ = writeln!(out, "STATIONS: {}", self.stations.len());
        let _ = writeln!(out, "CAPACITY: {}", self.cargo_capacity);
        let _ = writeln!(out, "ENERGY_CAPACITY: {}", self.battery_capacity);
        let _ = writeln!(out, "ENERGY_CONSUMPTION: {}", self.consumption_rate);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EUC_2D");
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for n in 0..self.problem_size() {
            let s = self.site(n);
            let _ = writeln!(out, "{} {} {}", s.label, s.x, s.y);
        }
        let _ = writeln!(out, "DEMAND_SECTION");
        let _ = writeln!(out, "{} 0", self.depot.label);
        for c in &self.customers {
            let _ = writeln!(out, "{} {}", c.site.label, c.demand);
        }
        let _ = writeln!(out, "STATIONS_COORD_SECTION");
        for s in &self.stations {
            let _ = writeln!(out, "{}", s.label);
        }
        let _ = writeln!(out, "DEPOT_SECTION");
        let _ = writeln!(out, "{}", self.depot.label);
        let _ = writeln!(out, "-1");
        let _ = writeln!(out, "EOF");
        out
    }
}

/// Wall-clock budget `omega * (|Vc| + |Vf|) / 100` hours.
pub fn max_time_budget(inst: &Instance, omega: f64) -> Result<Duration, InstanceError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(InstanceError::InvalidParameter { field: "omega", value: omega });
    }
    // hours * 3600 / 100
    let secs = omega * (inst.num_customers() + inst.num_stations()) as f64 * 36.0;
    Ok(Duration::from_secs_f64(secs))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Demands,
    Stations,
    Depot,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, InstanceError> {
    tok.parse().map_err(|_| InstanceError::Malformed {
        line,
        message: format!("cannot parse {what} from `{tok}`"),
    })
}

fn parse_evrp(text: &str) -> Result<Instance, InstanceError> {
    let mut name = None;
    let mut dimension: Option<usize> = None;
    let mut n_stations: Option<usize> = None;
    let mut capacity: Option<(u64, usize)> = None;
    let mut energy: Option<f64> = None;
    let mut consumption: Option<f64> = None;
    let mut vehicles: Option<usize> = None;
    let mut upper_bound = None;

    // (label, x, y, line) in file order
    let mut coords: Vec<(usize, f64, f64, usize)> = Vec::new();
    let mut demands: Vec<(usize, u64, usize)> = Vec::new();
    let mut station_labels: Vec<(usize, usize)> = Vec::new();
    let mut depot_label: Option<usize> = None;
    let mut seen = [false; 4];

    let mut section = Section::Header;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        match upper.as_str() {
            "NODE_COORD_SECTION" => {
                section = Section::Coords;
                seen[0] = true;
                continue;
            }
            "DEMAND_SECTION" => {
                section = Section::Demands;
                seen[1] = true;
                continue;
            }
            "STATIONS_COORD_SECTION" => {
                section = Section::Stations;
                seen[2] = true;
                continue;
            }
            "DEPOT_SECTION" => {
                section = Section::Depot;
                seen[3] = true;
                continue;
            }
            "EOF" => break,
            _ => {}
        }
        if let Some((key, value)) = line.split_once(':') {
            section = Section::Header;
            let key = key.trim().to_ascii_uppercase();
            let value = value.trim();
            match key.as_str() {
                "NAME" => name = Some(value.to_string()),
                "DIMENSION" => dimension = Some(parse_num(value, line_no, "DIMENSION")?),
                "STATIONS" => n_stations = Some(parse_num(value, line_no, "STATIONS")?),
                "CAPACITY" => {
                    let v: f64 = parse_num(value, line_no, "CAPACITY")?;
                    if v.fract() != 0.0 || v < 0.0 {
                        return Err(InstanceError::Malformed {
                            line: line_no,
                            message: format!("CAPACITY must be a non-negative integer, got {value}"),
                        });
                    }
                    capacity = Some((v as u64, line_no));
                }
                "ENERGY_CAPACITY" => energy = Some(parse_num(value, line_no, "ENERGY_CAPACITY")?),
                "ENERGY_CONSUMPTION" => {
                    consumption = Some(parse_num(value, line_no, "ENERGY_CONSUMPTION")?)
                }
                "VEHICLES" => vehicles = Some(parse_num(value, line_no, "VEHICLES")?),
                "OPTIMAL_VALUE" => upper_bound = Some(parse_num(value, line_no, "OPTIMAL_VALUE")?),
                // COMMENT, TYPE, EDGE_WEIGHT_TYPE and friends carry nothing we use
                _ => {}
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                return Err(InstanceError::Malformed {
                    line: line_no,
                    message: format!("unexpected content `{line}`"),
                })
            }
            Section::Coords => {
                if toks.len() != 3 {
                    return Err(InstanceError::Malformed {
                        line: line_no,
                        message: "expected `id x y`".into(),
                    });
                }
                let label = parse_num(toks[0], line_no, "node id")?;
                let x = parse_num(toks[1], line_no, "x coordinate")?;
                let y = parse_num(toks[2], line_no, "y coordinate")?;
                if coords.iter().any(|c| c.0 == label) {
                    return Err(InstanceError::DuplicateNodeId { line: line_no, label });
                }
                coords.push((label, x, y, line_no));
            }
            Section::Demands => {
                if toks.len() != 2 {
                    return Err(InstanceError::Malformed {
                        line: line_no,
                        message: "expected `id demand`".into(),
                    });
                }
                let label = parse_num(toks[0], line_no, "node id")?;
                let d: f64 = parse_num(toks[1], line_no, "demand")?;
                if d.fract() != 0.0 {
                    return Err(InstanceError::Malformed {
                        line: line_no,
                        message: format!("demand must be an integer, got {}", toks[1]),
                    });
                }
                if demands.iter().any(|e| e.0 == label) {
                    return Err(InstanceError::DuplicateNodeId { line: line_no, label });
                }
                demands.push((label, if d > 0.0 { d as u64 } else { 0 }, line_no));
                if d < 0.0 {
                    return Err(InstanceError::NonPositiveDemand { line: line_no, label });
                }
            }
            Section::Stations => {
                for t in toks {
                    let label: i64 = parse_num(t, line_no, "station id")?;
                    if label < 0 {
                        continue;
                    }
                    station_labels.push((label as usize, line_no));
                }
            }
            Section::Depot => {
                for t in toks {
                    let label: i64 = parse_num(t, line_no, "depot id")?;
                    if label < 0 {
                        continue;
                    }
                    if depot_label.is_some() {
                        return Err(InstanceError::Malformed {
                            line: line_no,
                            message: "only a single depot is supported".into(),
                        });
                    }
                    depot_label = Some(label as usize);
                }
            }
        }
    }

    let dimension = dimension.ok_or(InstanceError::MissingSection("DIMENSION"))?;
    let n_stations = n_stations.ok_or(InstanceError::MissingSection("STATIONS"))?;
    let (capacity, capacity_line) = capacity.ok_or(InstanceError::MissingSection("CAPACITY"))?;
    let energy = energy.ok_or(InstanceError::MissingSection("ENERGY_CAPACITY"))?;
    let consumption = consumption.ok_or(InstanceError::MissingSection("ENERGY_CONSUMPTION"))?;
    let vehicles = vehicles.ok_or(InstanceError::MissingSection("VEHICLES"))?;
    for (present, section) in seen.iter().zip([
        "NODE_COORD_SECTION",
        "DEMAND_SECTION",
        "STATIONS_COORD_SECTION",
        "DEPOT_SECTION",
    ]) {
        if !present {
            return Err(InstanceError::MissingSection(section));
        }
    }
    let depot_label = depot_label.ok_or(InstanceError::MissingSection("DEPOT_SECTION"))?;

    let find = |label: usize, line: usize| {
        coords
            .iter()
            .find(|c| c.0 == label)
            .map(|c| Site { label, x: c.1, y: c.2 })
            .ok_or(InstanceError::UnknownNode { line, label })
    };
    let depot = find(depot_label, 0)?;

    let mut stations = Vec::new();
    for &(label, line) in &station_labels {
        // the depot recharges anyway, so a listing among stations is redundant
        if label == depot_label {
            continue;
        }
        if stations.iter().any(|s: &Site| s.label == label) {
            return Err(InstanceError::DuplicateNodeId { line, label });
        }
        stations.push(find(label, line)?);
    }
    // keep stations in coordinate-section order
    stations.sort_by_key(|s| coords.iter().position(|c| c.0 == s.label));

    let mut customers = Vec::new();
    for &(label, x, y, _) in &coords {
        if label == depot_label || stations.iter().any(|s| s.label == label) {
            continue;
        }
        let &(_, demand, line) = demands
            .iter()
            .find(|d| d.0 == label)
            .ok_or(InstanceError::MissingDemand { label })?;
        if demand == 0 {
            return Err(InstanceError::NonPositiveDemand { line, label });
        }
        if demand > capacity {
            return Err(InstanceError::DemandExceedsCapacity {
                line,
                label,
                demand,
                capacity,
            });
        }
        customers.push(Customer { site: Site { label, x, y }, demand });
    }
    if let Some(&(label, _, line)) = demands.iter().find(|d| !coords.iter().any(|c| c.0 == d.0)) {
        return Err(InstanceError::UnknownNode { line, label });
    }
    if 1 + customers.len() != dimension {
        return Err(InstanceError::Malformed {
            line: 0,
            message: format!(
                "DIMENSION is {dimension} but the file defines a depot and {} customers",
                customers.len()
            ),
        });
    }
    if stations.len() != n_stations {
        return Err(InstanceError::Malformed {
            line: 0,
            message: format!("STATIONS is {n_stations} but {} stations are listed", stations.len()),
        });
    }
    if capacity == 0 {
        return Err(InstanceError::Malformed {
            line: capacity_line,
            message: "CAPACITY must be positive".into(),
        });
    }

    Instance::new(InstanceParts {
        name: name.unwrap_or_default(),
        depot,
        customers,
        stations,
        cargo_capacity: capacity,
        battery_capacity: energy,
        consumption_rate: consumption,
        fleet_size: vehicles,
        upper_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MINIMAL: &str = "\
NAME: minimal
TYPE: EVRP
VEHICLES: 1
DIMENSION: 2
STATIONS: 1
CAPACITY: 1
ENERGY_CAPACITY: 10
ENERGY_CONSUMPTION: 1.0
NODE_COORD_SECTION
1 0 0
2 3 4
3 1 1
DEMAND_SECTION
1 0
2 1
STATIONS_COORD_SECTION
3
DEPOT_SECTION
1
-1
EOF
";

    #[test]
    fn minimal_instance() {
        let inst = Instance::parse(MINIMAL).unwrap();
        assert_eq!(inst.num_customers(), 1);
        assert_eq!(inst.num_stations(), 1);
        assert_eq!(inst.problem_size(), 3);
        assert_eq!(inst.depot(), 0);
        assert!(inst.is_customer(1));
        assert!(inst.is_station(2));
        assert_eq!(inst.demand(1), 1);
        assert_eq!(inst.label(2), 3);
        assert_eq!(inst.cargo_capacity(), 1);
    }

    #[test]
    fn zero_demand_rejected() {
        let text = MINIMAL.replace("2 1\nSTATIONS", "2 0\nSTATIONS");
        assert!(matches!(
            Instance::parse(&text),
            Err(InstanceError::NonPositiveDemand { label: 2, line: 15 })
        ));
    }

    #[test]
    fn demand_over_capacity_rejected() {
        let text = MINIMAL.replace("2 1\nSTATIONS", "2 2\nSTATIONS");
        assert!(matches!(
            Instance::parse(&text),
            Err(InstanceError::DemandExceedsCapacity { label: 2, demand: 2, capacity: 1, .. })
        ));
    }

    #[test]
    fn duplicate_id_rejected() {
        let text = MINIMAL.replace("3 1 1\n", "2 1 1\n");
        assert!(matches!(
            Instance::parse(&text),
            Err(InstanceError::DuplicateNodeId { label: 2, line: 12 })
        ));
    }

    #[test]
    fn missing_section_reported() {
        let text = MINIMAL.replace("DEPOT_SECTION\n1\n-1\n", "");
        assert_eq!(
            Instance::parse(&text),
            Err(InstanceError::MissingSection("DEPOT_SECTION"))
        );
        let text = MINIMAL.replace("CAPACITY: 1\n", "");
        assert_eq!(Instance::parse(&text), Err(InstanceError::MissingSection("CAPACITY")));
    }

    #[test]
    fn header_keys_are_case_insensitive_and_unknown_keys_ignored() {
        let text = MINIMAL
            .replace("NAME: minimal", "Name: minimal\nCOMMENT: something\nOPTIMAL_VALUE: 10.5")
            .replace("TYPE: EVRP", "TYPE: EVRP\nEDGE_WEIGHT_TYPE: EUC_2D");
        let inst = Instance::parse(&text).unwrap();
        assert_eq!(inst.name(), "minimal");
        assert_eq!(inst.upper_bound(), Some(10.5));
    }

    #[test]
    fn round_trip() {
        let inst = Instance::parse(MINIMAL).unwrap();
        let again = Instance::parse(&inst.to_evrp_string()).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn time_budget() {
        let inst = Instance::parse(MINIMAL).unwrap();
        // (1 + 1) / 100 hours
        assert_eq!(max_time_budget(&inst, 1.0).unwrap(), Duration::from_secs_f64(72.0));
        assert!(max_time_budget(&inst, 0.0).is_err());
        assert!(max_time_budget(&inst, -1.0).is_err());
    }
}
