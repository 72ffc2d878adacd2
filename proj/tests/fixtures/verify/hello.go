package main

import "fmt"

func main() {
	total := 0
	for i := 0; i < 10; i++ {
		if i%2 == 0 {
			total += i
		}
	}
	fmt.Println(total)
}
