//! Small synthetic instances for tests, examples and the guide.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Customer, Instance, InstanceParts, Site};

/// Builds an instance from raw coordinates. Labels follow the file
/// convention: depot `1`, customers `2..`, then stations.
pub fn instance_with(
    depot: (f64, f64),
    customers: &[((f64, f64), u64)],
    stations: &[(f64, f64)],
    cargo_capacity: u64,
    battery_capacity: f64,
    consumption_rate: f64,
    fleet_size: usize,
) -> Instance {
    let customers = customers
        .iter()
        .enumerate()
        .map(|(k, &((x, y), demand))| Customer { site: Site { label: k + 2, x, y }, demand })
        .collect::<Vec<_>>();
    let first_station = customers.len() + 2;
    let stations = stations
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| Site { label: first_station + k, x, y })
        .collect();
    Instance::new(InstanceParts {
        name: "synthetic".into(),
        depot: Site { label: 1, x: depot.0, y: depot.1 },
        customers,
        stations,
        cargo_capacity,
        battery_capacity,
        consumption_rate,
        fleet_size,
        upper_bound: None,
    })
    .expect("fixture parameters are valid")
}

/// Depot at the origin, unit demands, `h = 1`, enough capacity and vehicles
/// for any partition.
pub fn line_instance(customers: &[(f64, f64)], stations: &[(f64, f64)], battery: f64) -> Instance {
    let n = customers.len().max(1);
    let cs: Vec<_> = customers.iter().map(|&c| (c, 1)).collect();
    instance_with((0.0, 0.0), &cs, stations, n as u64, battery, 1.0, n)
}

/// Seeded random instance on a 100x100 square with the depot in the centre.
///
/// Cargo capacity is large enough that a first-fit packing into `fleet`
/// vehicles always exists. The battery allows every out-and-back trip with a
/// margin drawn from `[1.05, 1.5)`, so longer routes often need charging.
pub fn random_instance(seed: u64, n_customers: usize, n_stations: usize, fleet: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depot = (50.0, 50.0);
    let point = |rng: &mut ChaCha8Rng| {
        (rng.random_range(0.0..100.0f64).round(), rng.random_range(0.0..100.0f64).round())
    };
    let customers: Vec<_> = (0..n_customers)
        .map(|_| {
            let p = point(&mut rng);
            (p, rng.random_range(1..=10u64))
        })
        .collect();
    let stations: Vec<_> = (0..n_stations).map(|_| point(&mut rng)).collect();
    let total: u64 = customers.iter().map(|c| c.1).sum();
    let max_demand = customers.iter().map(|c| c.1).max().unwrap_or(1);
    let fleet = fleet.max(1);
    let capacity = total.div_ceil(fleet as u64) + max_demand;
    let farthest = customers
        .iter()
        .map(|&((x, y), _)| (x - depot.0).hypot(y - depot.1))
        .fold(1.0f64, f64::max);
    let margin = rng.random_range(1.05..1.5);
    let battery = (2.0 * farthest * margin).ceil();
    instance_with(depot, &customers, &stations, capacity, battery, 1.0, fleet)
}
