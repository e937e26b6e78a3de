var clientId = "1e3a4f7c9d2b48e6";
var apiRoot = "https://api.instagram.com/v1";

$("#search").on("click", function () {
  var searchHashtag = $("#hashtag").val();
  loadPhotos(searchHashtag);
});

function tagUrl(tag) {
  return apiRoot + "/tags/" + tag + "/media/recent";
}

function loadPhotos(searchHashtag) {
  $.ajax({
    url: tagUrl(searchHashtag) + "?client_id=" + clientId,
    dataType: "jsonp",
    type: "GET",
    success: function (result) {
      render(result.data);
    }
  });
}
