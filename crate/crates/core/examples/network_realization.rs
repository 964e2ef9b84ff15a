//! One sampled network: the typical cell and its users, as a TSV table on stdout.

use harvest_noma::geometry::NetworkRealization;
use harvest_noma::streams::{stream, Purpose};

fn main() -> harvest_noma::Result<()> {
    let net = NetworkRealization::sample(
        30.0,
        100.0,
        1.0,
        &mut stream(2, Purpose::BaseStations, 0),
        &mut stream(2, Purpose::Users, 0),
    )?;
    let typical = net.typical_cell()?;
    eprintln!(
        "{} BSs, {} UEs, typical BS {typical} serves {}",
        net.bs_points.len(),
        net.ue_points.len(),
        net.cell_members(typical).len()
    );
    net.write_table(std::io::stdout().lock())?;
    Ok(())
}
