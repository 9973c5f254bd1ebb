from simulations.management.commands._base import SimulationCommand, ValidationFailed


class Command(SimulationCommand):
    help = "Compare closed-form click probabilities with the truncated Fock oracle (CSV report)."

    def run_engine(self, engine):
        return engine.validate()

    def check_result(self, frame):
        failures = frame.loc[~frame["passed"]]
        if len(failures):
            raise ValidationFailed(
                f"{len(failures)}/{len(frame)} comparisons above tolerance, "
                f"max deviation {frame['deviation'].max():.3e}"
            )
