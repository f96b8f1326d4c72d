use iid_moments::{evaluate, moment_of_sum, Mode, MomentAssignment, MomentProvider};

#[test]
fn uniform_fourth_moment() -> Result<(), Box<dyn std::error::Error>> {
    let e = moment_of_sum(4, Mode::General)?;
    let dist: MomentProvider = "uniform(-1,1)".parse()?;
    let u = MomentAssignment::from_provider(&dist, 4)?;
    assert_eq!(evaluate(&e, 30, &u)?.to_string(), "296");
    Ok(())
}
