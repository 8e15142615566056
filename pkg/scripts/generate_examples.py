from tazrp_tetra.interface import VerificationInterface
from tazrp_tetra.models import Sector, Settings
from tazrp_tetra.writers import writer_for

# Settings are normally read from TAZRP_* environment variables
interface = VerificationInterface(Settings(workers=1))

# Two species on a ring of three sites, two particles of species 1 and one
# of species 2
sector = Sector(n=2, L=3, multiplicity=(2, 1))

rows, summary = interface.steady_state(sector, cross_check=True)
print(writer_for('text').write_table(rows, summary))
print()

# The same table as JSON lines, one object per configuration
print(writer_for('json').write_table(rows, summary))
print()

# A verification report, rendered as XML. Without --timing the document is
# identical between runs
report = interface.verify_r_properties(max_index=2)
print(writer_for('xml').write_report(report))
print()

# The sign-flipped R coefficients break the involution property
mutated = interface.verify_r_properties(max_index=1, mutate=True)
print(writer_for('text').write_report(mutated))
