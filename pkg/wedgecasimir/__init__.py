"""wedgecasimir — Casimir stresses and Casimir–Polder energies in a medium-filled wedge."""
