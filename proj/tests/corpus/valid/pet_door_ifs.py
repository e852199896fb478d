# separate if statements still form an application-choice chain
import vision

Small = ['cat', 'kitten']
Large = ['dog', 'puppy', 'wolf']

photo = vision.Image(content=frame)
res = client.label_detection(image=photo)
names = [a.name for a in res.label_annotations]

if intersects(names, Large):   # checked first
    return 'stay closed'
if intersects(Small, names):
    return 'open'
return 'ignore'
