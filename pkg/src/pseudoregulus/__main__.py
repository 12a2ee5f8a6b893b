from pseudoregulus.cli import main

main()
